"""Finite representations of elementary abelian p-groups and the p^r bound.

A FiniteRep is a list of commuting order-p matrices over F_p — the
images of independent generators of (Z/p)^r.  The central fact used
downstream: because (g - id)^p = g^p - id = 0, the kernel filtration of
any single generator climbs to the whole space in at most p steps with
non-increasing increments, which forces

    dim V^G  >=  dim V / p^r

exactly (as rationals).  dichotomy_probe applies that bound along a
nested chain of invariant subspaces and reports how the fixed part and
its complementary quotient grow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ChainInvariantViolation, DimensionMismatch, NonCommuting, NotOrderP
from .linalg import (
    FpMatrix,
    QuotientSpace,
    Subspace,
    check_prime,
    inverse,
    kernel,
    map_image,
    quotient,
    rref,
)


class FiniteRep:
    """Commuting order-p generator matrices acting on F_p^dim."""

    __slots__ = ("p", "dim", "generators", "label")

    MAX_GENERATORS = 6  # the p^r bound is vacuous at desk scale beyond this

    def __init__(self, p: int, dim: int, generators, label: str = ""):
        check_prime(p)
        gens = tuple(generators)
        if len(gens) > self.MAX_GENERATORS:
            raise DimensionMismatch(
                f"{len(gens)} generators exceeds the cap of {self.MAX_GENERATORS}"
            )
        for g in gens:
            if g.p != p:
                raise DimensionMismatch("generator over the wrong field")
            if g.shape != (dim, dim):
                raise DimensionMismatch(f"generator shape {g.shape} vs dim {dim}")
        ident = FpMatrix.identity(p, dim)
        for i, g in enumerate(gens):
            if g**p != ident:
                raise NotOrderP(f"generator {i} does not satisfy g^p = id")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if gens[i] @ gens[j] != gens[j] @ gens[i]:
                    raise NonCommuting(f"generators {i} and {j} do not commute", offsets=(i, j))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteRep is immutable")

    @property
    def r(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"FiniteRep(p={self.p}, dim={self.dim}, r={self.r})"


def fixed_space(rep: FiniteRep) -> Subspace:
    """V^G = the joint kernel of g - id over the generators."""
    ident = FpMatrix.identity(rep.p, rep.dim)
    space = Subspace.full(rep.p, rep.dim)
    for g in rep.generators:
        space = space.intersect(kernel(g - ident))
    return space


@dataclass(frozen=True)
class FiltrationReport:
    """Kernel filtration d(i) = dim ker (g - id)^i for i = 0..p."""

    p: int
    dim: int
    dims: tuple[int, ...]

    @property
    def differences(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.dims, self.dims[1:]))

    @property
    def concave(self) -> bool:
        d = self.differences
        return all(x >= y for x, y in zip(d, d[1:]))

    @property
    def exhausts(self) -> bool:
        return self.dims[-1] == self.dim

    @property
    def fixed_dim(self) -> int:
        return self.dims[1]

    @property
    def lower_bound(self) -> Fraction:
        return Fraction(self.dim, self.p)

    @property
    def bound_ok(self) -> bool:
        return self.fixed_dim >= self.lower_bound

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "differences": list(self.differences),
            "concave": self.concave,
            "exhausts": self.exhausts,
            "fixed_dim": self.fixed_dim,
            "lower_bound": str(self.lower_bound),
            "bound_ok": self.bound_ok,
        }


def kernel_filtration(g: FpMatrix, p: int) -> FiltrationReport:
    """Filtration of one order-p generator; errors if g^p != id."""
    if g.p != p or g.rows != g.cols:
        raise DimensionMismatch("need a square matrix over F_p")
    n = g.rows
    ident = FpMatrix.identity(p, n)
    if g**p != ident:
        raise NotOrderP("matrix does not satisfy g^p = id")
    nil = g - ident
    dims = [0]
    power = ident
    for _ in range(p):
        power = power @ nil
        dims.append(kernel(power).dim)
    return FiltrationReport(p, n, tuple(dims))


@dataclass(frozen=True)
class BoundCheck:
    fixed_dim: int
    lower_bound: Fraction
    ok: bool

    def to_dict(self) -> dict:
        return {
            "fixed_dim": self.fixed_dim,
            "lower_bound": str(self.lower_bound),
            "ok": self.ok,
        }


def fixed_bound_check(rep: FiniteRep) -> BoundCheck:
    """Exact rational comparison dim V^G >= dim V / p^r."""
    lhs = fixed_space(rep).dim
    rhs = Fraction(rep.dim, rep.p**rep.r)
    return BoundCheck(lhs, rhs, lhs >= rhs)


def restrict_rep(rep: FiniteRep, w: Subspace, label: str = "") -> FiniteRep:
    """The same generators in coordinates of an invariant subspace w."""
    if w.p != rep.p or w.ambient_dim != rep.dim:
        raise DimensionMismatch("subspace does not live in the representation space")
    mats = []
    for g in rep.generators:
        if not w.contains(map_image(g, w)):
            raise ChainInvariantViolation("subspace is not invariant under a generator")
        cols = [w.coordinates(g.apply(row)) for row in w.basis.a]
        if cols:
            mats.append(FpMatrix(rep.p, np.array(cols, dtype=np.int64).T))
        else:
            mats.append(FpMatrix.zeros(rep.p, 0, 0))
    return FiniteRep(rep.p, w.dim, mats, label or rep.label)


def quotient_rep(rep: FiniteRep, u: Subspace, label: str = "") -> FiniteRep:
    """Induced representation on V/u for an invariant subspace u."""
    if u.p != rep.p or u.ambient_dim != rep.dim:
        raise DimensionMismatch("subspace does not live in the representation space")
    q = quotient(Subspace.full(rep.p, rep.dim), u)
    mats = [q.induced(g) for g in rep.generators]
    return FiniteRep(rep.p, q.dim, mats, label or rep.label)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    total_dim: int
    fixed_dim: int
    quotient_fixed_dim: int
    lower_bound: Fraction
    ok: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.total_dim,
            "fixed_dim": self.fixed_dim,
            "quotient_fixed_dim": self.quotient_fixed_dim,
            "lower_bound": str(self.lower_bound),
            "bound_ok": self.ok,
        }


@dataclass(frozen=True)
class GrowthReport:
    rows: tuple[GrowthRow, ...]
    ok: bool

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "ok": self.ok}


def dichotomy_probe(rep: FiniteRep, chain) -> GrowthReport:
    """Fixed-part growth along a strictly nested chain of invariant subspaces.

    For each member V_n the report records dim V_n, dim V_n^G, the
    fixed dimension of V_n / V_n^G, and the exact bound
    dim V_n^G >= dim V_n / p^r.  The chain must be strictly increasing
    and every member invariant under every generator.
    """
    members = list(chain)
    prev: Subspace | None = None
    for v in members:
        if v.p != rep.p or v.ambient_dim != rep.dim:
            raise DimensionMismatch("chain member outside the representation space")
        if prev is not None:
            if not v.contains(prev) or v.dim <= prev.dim:
                raise ChainInvariantViolation("chain is not strictly nested")
        prev = v
    rows = []
    all_ok = True
    for n, v in enumerate(members, start=1):
        sub = restrict_rep(rep, v)
        fixed = fixed_space(sub)
        qrep = quotient_rep(sub, fixed)
        qfixed = fixed_space(qrep).dim
        bound = Fraction(sub.dim, rep.p**rep.r)
        ok = fixed.dim >= bound
        all_ok = all_ok and ok
        rows.append(GrowthRow(n, sub.dim, fixed.dim, qfixed, bound, ok))
    return GrowthReport(tuple(rows), all_ok)


def _random_invertible(rng, p: int, n: int) -> FpMatrix:
    while True:
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(n)] for _ in range(n)])
        if rref(m).rank == n:
            return m


def _jordan_block_poly(rng, p: int, size: int) -> np.ndarray:
    """Unipotent polynomial in the nilpotent Jordan shift: id + sum c_i N^i."""
    a = np.eye(size, dtype=np.int64)
    shift = np.eye(size, dtype=np.int64, k=1)
    power = shift.copy()
    for _ in range(1, size):
        a = (a + rng.randrange(p) * power) % p
        power = power @ shift
    return a


def random_commuting_rep(rng, p: int, dim: int, r: int, label: str = "random") -> FiniteRep:
    """Random FiniteRep: conjugated block-diagonal unipotent polynomials.

    Each generator is block-diagonal over one shared partition into
    Jordan cells of size <= p, with every block a polynomial in the
    cell's shift; one common random change of basis is applied to all
    generators, so commutation and order p hold by construction.
    """
    check_prime(p)
    sizes = []
    left = dim
    while left > 0:
        s = rng.randint(1, min(p, left))
        sizes.append(s)
        left -= s
    blocks_per_gen = []
    for _ in range(r):
        a = np.zeros((dim, dim), dtype=np.int64)
        at = 0
        for s in sizes:
            a[at : at + s, at : at + s] = _jordan_block_poly(rng, p, s)
            at += s
        blocks_per_gen.append(a)
    q = _random_invertible(rng, p, dim)
    qi = inverse(q)
    gens = [q @ FpMatrix(p, a) @ qi for a in blocks_per_gen]
    return FiniteRep(p, dim, gens, label)


def random_order_p_matrix(rng, p: int, dim: int) -> FpMatrix:
    """One random unipotent matrix with g^p = id (single-generator case)."""
    return random_commuting_rep(rng, p, dim, 1).generators[0]
