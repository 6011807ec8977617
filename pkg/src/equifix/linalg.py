"""Exact dense linear algebra over the prime fields F_p, p <= 97.

Matrices are immutable wrappers around numpy int64 arrays with every
entry reduced mod p; vectors are plain 1-D int64 arrays.  Matrices act
on column vectors (``m @ v``).  Subspaces are stored as row spans in
canonical reduced row echelon form, so two subspaces are equal exactly
when their basis arrays are equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidQuotient

MAX_PRIME = 97
MAX_DIM = 512


def check_prime(p: int) -> int:
    """Validate p as a prime in range (trial division is plenty here)."""
    if not isinstance(p, int) or p < 2 or p > MAX_PRIME:
        raise ValueError(f"p must be a prime in [2, {MAX_PRIME}], got {p!r}")
    for q in range(2, int(p**0.5) + 1):
        if p % q == 0:
            raise ValueError(f"p must be prime, got {p} = {q} * {p // q}")
    return p


def _inv_mod(a: int, p: int) -> int:
    # Fermat: a^(p-2) mod p, valid since p is prime and a nonzero.
    return pow(a, p - 2, p)


def as_vector(p: int, data) -> np.ndarray:
    """Coerce data to a reduced 1-D int64 vector mod p."""
    v = np.asarray(data, dtype=np.int64) % p
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {v.shape}")
    return v


class FpMatrix:
    """Immutable matrix over F_p backed by a numpy int64 array."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, data):
        check_prime(p)
        a = np.asarray(data, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got shape {a.shape}")
        if max(a.shape, default=0) > MAX_DIM:
            raise DimensionMismatch(f"matrix dimension beyond {MAX_DIM}: {a.shape}")
        a = a % p
        a.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def _check_same_field(self, other: "FpMatrix"):
        if self.p != other.p:
            raise DimensionMismatch(f"mixed fields F_{self.p} and F_{other.p}")

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return FpMatrix(self.p, self.a + other.a)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return FpMatrix(self.p, self.a - other.a)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix(self.p, (self.a @ other.a) % self.p)

    def __pow__(self, n: int) -> "FpMatrix":
        if self.rows != self.cols:
            raise DimensionMismatch("matrix power needs a square matrix")
        if n < 0:
            raise ValueError("negative matrix powers are not supported")
        result = FpMatrix.identity(self.p, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a * (c % self.p))

    def apply(self, v) -> np.ndarray:
        """Matrix-vector product m @ v over F_p."""
        vec = as_vector(self.p, v)
        if vec.shape[0] != self.cols:
            raise DimensionMismatch(f"vector length {vec.shape[0]} vs {self.cols} columns")
        return (self.a @ vec) % self.p

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.p, self.shape, self.a.tobytes()))

    def row_strings(self) -> list[str]:
        """Rows as comma-separated digit strings, for debugging and reports."""
        return [",".join(str(int(x)) for x in row) for row in self.a]

    def __repr__(self) -> str:
        body = "; ".join(self.row_strings())
        return f"FpMatrix(p={self.p}, [{body}])"


@dataclass(frozen=True)
class RrefResult:
    matrix: FpMatrix
    rank: int
    pivots: tuple[int, ...]


def rref(m: FpMatrix) -> RrefResult:
    """Reduced row echelon form by Gauss–Jordan elimination.

    Returns the reduced matrix, its rank, and the pivot column indices.
    The output is the canonical representative of the row space: two
    matrices have the same row space iff their rrefs are identical
    after dropping zero rows.
    """
    p = m.p
    a = np.array(m.a, dtype=np.int64)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(int(a[r, c]), p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return RrefResult(FpMatrix(p, a), r, tuple(pivots))


def kernel(m: FpMatrix) -> "Subspace":
    """Null space {v : m @ v = 0} as a canonical Subspace."""
    red = rref(m)
    p, ncols = m.p, m.cols
    pivots = list(red.pivots)
    free = [c for c in range(ncols) if c not in set(pivots)]
    rows = []
    ra = red.matrix.a
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-int(ra[i, f])) % p
        rows.append(v)
    return Subspace.from_rows(p, ncols, rows)


class Subspace:
    """Row-span of vectors in F_p^n, stored as a canonical rref basis."""

    __slots__ = ("p", "ambient_dim", "basis")

    def __init__(self, p: int, ambient_dim: int, basis: FpMatrix):
        # `basis` must already be a canonical rref with no zero rows;
        # use from_rows to build from arbitrary spanning vectors.
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_rows(cls, p: int, ambient_dim: int, rows) -> "Subspace":
        """Canonicalize arbitrary spanning rows into a Subspace."""
        if ambient_dim > MAX_DIM:
            raise DimensionMismatch(f"ambient dimension beyond {MAX_DIM}")
        mat = np.array(rows, dtype=np.int64)
        if mat.size == 0:  # reshape(-1, 0) is ambiguous for numpy
            mat = mat.reshape(0, ambient_dim)
        else:
            mat = mat.reshape(-1, ambient_dim)
        red = rref(FpMatrix(p, mat))
        return cls(p, ambient_dim, FpMatrix(p, red.matrix.a[: red.rank]))

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls.from_rows(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64))

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls.from_rows(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def _check_compatible(self, other: "Subspace"):
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")

    def contains_vector(self, v) -> bool:
        vec = as_vector(self.p, v)
        if vec.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        # Reduce v against the rref basis: subtract the pivot-coordinate
        # multiples and see whether anything is left.
        residue = vec.copy()
        ba = self.basis.a
        pivots = _pivots_of_rref(ba)
        for i, c in enumerate(pivots):
            coef = int(residue[c])
            if coef:
                residue = (residue - coef * ba[i]) % self.p
        return not residue.any()

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of v against the canonical basis (v must be a member)."""
        vec = as_vector(self.p, v)
        if not self.contains_vector(vec):
            raise DimensionMismatch("vector is not in the subspace")
        pivots = _pivots_of_rref(self.basis.a)
        return vec[list(pivots)] if pivots else np.zeros(0, dtype=np.int64)

    def contains(self, other: "Subspace") -> bool:
        """Whether other is contained in self."""
        self._check_compatible(other)
        if other.dim == 0:
            return True
        stacked = np.vstack([self.basis.a, other.basis.a])
        return rref(FpMatrix(self.p, stacked)).rank == self.dim

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        stacked = np.vstack([self.basis.a, other.basis.a])
        return Subspace.from_rows(self.p, self.ambient_dim, stacked)

    def constraints(self) -> FpMatrix:
        """Matrix C with self = {v : C @ v = 0} (rows span the annihilator)."""
        ker = kernel(self.basis) if self.dim else Subspace.full(self.p, self.ambient_dim)
        return ker.basis

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        c = np.vstack([self.constraints().a, other.constraints().a])
        if c.shape[0] == 0:
            return Subspace.full(self.p, self.ambient_dim)
        return kernel(FpMatrix(self.p, c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))

    def row_strings(self) -> list[str]:
        return self.basis.row_strings()

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient={self.ambient_dim}, dim={self.dim})"


def _pivots_of_rref(a: np.ndarray) -> tuple[int, ...]:
    # Basis arrays are always rref with no zero rows, so the pivot of each
    # row is its first nonzero column.
    out = []
    for row in a:
        nz = np.nonzero(row)[0]
        out.append(int(nz[0]))
    return tuple(out)


def map_image(m: FpMatrix, u: Subspace) -> Subspace:
    """Image {m @ v : v in u}."""
    if m.p != u.p or m.cols != u.ambient_dim:
        raise DimensionMismatch("map and subspace are incompatible")
    rows = (u.basis.a @ m.a.T) % m.p
    return Subspace.from_rows(m.p, m.rows, rows)


def map_preimage(m: FpMatrix, u: Subspace) -> Subspace:
    """Preimage {v : m @ v in u}."""
    if m.p != u.p or m.rows != u.ambient_dim:
        raise DimensionMismatch("map and subspace are incompatible")
    c = u.constraints()
    if c.rows == 0:
        return Subspace.full(m.p, m.cols)
    return kernel(c @ m)


def inverse(m: FpMatrix) -> FpMatrix:
    """Exact inverse of a square matrix, via rref of [m | I]."""
    if m.rows != m.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    n = m.rows
    red = rref(FpMatrix(m.p, np.hstack([m.a, np.eye(n, dtype=np.int64)])))
    if red.rank != n or red.pivots != tuple(range(n)):
        raise DimensionMismatch("matrix is singular")
    return FpMatrix(m.p, red.matrix.a[:, n:])


class QuotientSpace:
    """Quotient ambient/modded with an explicit transversal of coset reps.

    Coordinates on the quotient are taken against `coset_basis`, whose
    rows are ambient basis vectors chosen greedily so their classes are
    independent; project and lift are mutually inverse on coordinates.
    """

    __slots__ = ("p", "ambient", "modded", "coset_basis", "_proj")

    def __init__(self, ambient: Subspace, modded: Subspace):
        ambient._check_compatible(modded)
        if not ambient.contains(modded):
            raise InvalidQuotient("modded subspace is not contained in the ambient")
        p = ambient.p
        chosen: list[np.ndarray] = []
        span = modded
        for row in ambient.basis.a:
            if span.contains_vector(row):
                continue
            chosen.append(np.array(row))
            span = span.sum(Subspace.from_rows(p, ambient.ambient_dim, [row]))
            if span.dim == ambient.dim:
                break
        coset = np.array(chosen, dtype=np.int64).reshape(-1, ambient.ambient_dim)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "modded", modded)
        object.__setattr__(self, "coset_basis", FpMatrix(p, coset))
        # Left inverse of [coset_rows; modded_rows]^T, computed once; the
        # first `dim` rows of _proj @ v are the quotient coordinates.
        cols = np.vstack([coset, modded.basis.a]).T
        if cols.shape[1]:
            eye = np.eye(ambient.ambient_dim, dtype=np.int64)
            red = rref(FpMatrix(p, np.hstack([cols, eye])))
            k = cols.shape[1]
            if red.pivots[:k] != tuple(range(k)):
                raise InvalidQuotient("transversal construction failed")  # pragma: no cover
            proj = red.matrix.a[:k, k:]
        else:
            proj = np.zeros((0, ambient.ambient_dim), dtype=np.int64)
        object.__setattr__(self, "_proj", proj)

    def __setattr__(self, name, value):
        raise AttributeError("QuotientSpace is immutable")

    @property
    def dim(self) -> int:
        return self.coset_basis.rows

    def project(self, v) -> np.ndarray:
        """Quotient coordinates of the class of v (v must be in the ambient)."""
        vec = as_vector(self.p, v)
        if not self.ambient.contains_vector(vec):
            raise DimensionMismatch("vector is not in the ambient subspace")
        return (self._proj @ vec)[: self.dim] % self.p

    def lift(self, coords) -> np.ndarray:
        """Canonical representative of the class with the given coordinates."""
        c = as_vector(self.p, coords)
        if c.shape[0] != self.dim:
            raise DimensionMismatch(f"expected {self.dim} quotient coordinates")
        if self.dim == 0:
            return np.zeros(self.ambient.ambient_dim, dtype=np.int64)
        return (c @ self.coset_basis.a) % self.p

    def induced(self, m: FpMatrix) -> FpMatrix:
        """Matrix of the map induced by m on the quotient.

        Requires m(ambient) <= ambient and m(modded) <= modded.
        """
        if not self.ambient.contains(map_image(m, self.ambient)):
            raise InvalidQuotient("map does not preserve the ambient subspace")
        if not self.modded.contains(map_image(m, self.modded)):
            raise InvalidQuotient("map does not preserve the modded subspace")
        cols = []
        for j in range(self.dim):
            e = np.zeros(self.dim, dtype=np.int64)
            e[j] = 1
            cols.append(self.project(m.apply(self.lift(e))))
        if not cols:
            return FpMatrix.zeros(self.p, 0, 0)
        return FpMatrix(self.p, np.array(cols, dtype=np.int64).T)


def quotient(ambient: Subspace, modded: Subspace) -> QuotientSpace:
    """Build the quotient space ambient/modded."""
    return QuotientSpace(ambient, modded)
