"""Maximal invariant subspaces and certified fixed points on finite windows.

The pipeline realized here, all in exact window coordinates:

  1. For each depth ell, compute the largest subspace of the lattice
     image that every visible generator maps onto itself
     (max_invariant_subspace), giving a descending chain whose
     intersection m_hat is stable under multiplication by t.
  2. Intersect the window fixed space with m_hat, pick a deterministic
     nonzero witness (preferring one outside t*m_hat), and re-verify it
     from scratch by applying the action to the lifted series vector.
  3. Package the shifted copies t^-n * m_hat as a nested chain of
     subspaces in a quotient, ready for the representation-theoretic
     growth probe (replab.dichotomy_probe).

Window arithmetic convention: a vector of window coordinates stands for
the canonical representative supported on exponents [lo, hi).  Reads
outside the window see zero; writes at or above t^hi vanish; writes
below the floor are either hard errors (single-generator matrices) or
exact linear conditions (fixed-space computation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import Action, apply_phi, fixed_condition_rows, generator_matrices
from .errors import (
    ChainInvariantViolation,
    DimensionMismatch,
    EmptyFixedSpace,
    InsufficientPrecision,
    InvalidQuotient,
    SingularGenerator,
    WindowTooNarrow,
)
from .laurent import (
    LatticeWindow,
    LaurentSeries,
    SeriesVector,
    coords_to_vector,
    format_series,
)
from .linalg import (
    FpMatrix,
    QuotientSpace,
    Subspace,
    kernel,
    map_image,
    map_preimage,
    quotient,
    rref,
)
from .replab import FiniteRep


def window_b_image(w: LatticeWindow) -> Subspace:
    """Coordinate image of the lattice (exponents >= 0) inside the window."""
    rows = []
    eye = np.eye(w.dim, dtype=np.int64)
    for c in range(1, w.d + 1):
        for e in range(max(w.lo, 0), w.hi):
            rows.append(eye[w.index(c, e)])
    return Subspace.from_rows(w.p, w.dim, rows)


def monomial_transfer(src: LatticeWindow, dst: LatticeWindow, n: int) -> FpMatrix:
    """Matrix of multiplication by t^n from src coordinates to dst coordinates.

    Exponent e goes to e + n; targets outside [dst.lo, dst.hi) are
    dropped, so this is a projection unless every shifted exponent
    lands inside dst.  Callers that need faithfulness must arrange
    supports accordingly (they do: lattice elements have exponents
    >= 0 and the windows used reach low enough).
    """
    if src.p != dst.p or src.d != dst.d:
        raise DimensionMismatch("windows are incompatible")
    a = np.zeros((dst.dim, src.dim), dtype=np.int64)
    for c in range(1, src.d + 1):
        for e in range(src.lo, src.hi):
            if dst.contains_exp(e + n):
                a[dst.index(c, e + n), src.index(c, e)] = 1
    return FpMatrix(src.p, a)


def shift_matrix(w: LatticeWindow) -> FpMatrix:
    """Multiplication by t on window coordinates (top coefficient truncated)."""
    return monomial_transfer(w, w, 1)


def max_invariant_subspace(gens, ambient: LatticeWindow, b_image: Subspace) -> Subspace:
    """Largest subspace N of b_image with g*N = N for every generator.

    Greatest fixed point of N -> N ∩ ⋂_g (image(g,N) ∩ preimage(g,N)),
    iterated from b_image.  Both the image and preimage cuts are taken
    against the subspace fixed at the start of each round, which makes
    the result independent of generator order; termination follows
    from strict dimension descent.
    """
    mats = list(gens)
    for m in mats:
        if m.p != ambient.p or m.shape != (ambient.dim, ambient.dim):
            raise DimensionMismatch("generator does not act on the window")
        if rref(m).rank != ambient.dim:
            raise SingularGenerator("generator is singular on the window")
    if b_image.p != ambient.p or b_image.ambient_dim != ambient.dim:
        raise DimensionMismatch("b_image does not live on the window")
    current = b_image
    while True:
        nxt = current
        for m in mats:
            nxt = nxt.intersect(map_image(m, current))
            nxt = nxt.intersect(map_preimage(m, current))
        if nxt == current:
            return current
        assert nxt.dim < current.dim
        current = nxt


@dataclass(frozen=True)
class InvariantChain:
    """Descending invariant subspaces M̂_0 ⊇ M̂_1 ⊇ ... and their intersection.

    All members live in window coordinates.  Construction-time checks
    guarantee: each member sits inside the lattice image, each meets
    the shell (it is not contained in the exponent >= 1 part), the
    chain is nested, and t * m_hat ⊆ m_hat.
    """

    action: Action
    window: LatticeWindow
    subspaces: tuple[Subspace, ...]
    m_hat: Subspace
    l_stable: int

    @property
    def l_max(self) -> int:
        return len(self.subspaces) - 1

    def dims(self) -> list[int]:
        return [s.dim for s in self.subspaces]

    def to_dict(self) -> dict:
        return {
            "window": {"lo": self.window.lo, "hi": self.window.hi},
            "dims": self.dims(),
            "m_hat_dim": self.m_hat.dim,
            "m_hat_basis": self.m_hat.row_strings(),
            "l_stable": self.l_stable,
        }


def _shell_image(w: LatticeWindow) -> Subspace:
    """Image of the exponent >= 1 part of the lattice (t times the lattice)."""
    rows = []
    eye = np.eye(w.dim, dtype=np.int64)
    for c in range(1, w.d + 1):
        for e in range(max(w.lo, 1), w.hi):
            rows.append(eye[w.index(c, e)])
    return Subspace.from_rows(w.p, w.dim, rows)


def m_ell_chain(a: Action, l_max: int, w: LatticeWindow) -> InvariantChain:
    """Compute M̂_ell for ell = 0..l_max and certify the chain structure.

    Raises ChainInvariantViolation if nesting, shell intersection, or
    t-stability of the intersection fails — for certified actions these
    hold, so a failure signals a bug (or a window far too narrow).
    """
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    b_img = window_b_image(w)
    t_b_img = _shell_image(w)
    subs: list[Subspace] = []
    for ell in range(l_max + 1):
        mats = [m for _, m in generator_matrices(a, ell, w)]
        sub = max_invariant_subspace(mats, w, b_img)
        if not b_img.contains(sub):
            raise ChainInvariantViolation("member escapes the lattice image")
        if t_b_img.contains(sub):
            raise ChainInvariantViolation(
                f"member at depth {ell} misses the shell: every element is divisible by t"
            )
        if subs and not subs[-1].contains(sub):
            raise ChainInvariantViolation(f"chain fails to nest at depth {ell}")
        subs.append(sub)
    m_hat = subs[0]
    for sub in subs[1:]:
        m_hat = m_hat.intersect(sub)
    if m_hat != subs[-1]:  # intersection of a nested chain is its last member
        raise ChainInvariantViolation("intersection disagrees with the deepest member")
    shifted = map_image(shift_matrix(w), m_hat)
    if not m_hat.contains(shifted):
        raise ChainInvariantViolation("t * m_hat is not contained in m_hat")
    l_stable = l_max
    while l_stable > 0 and subs[l_stable - 1] == subs[l_max]:
        l_stable -= 1
    return InvariantChain(a, w, tuple(subs), m_hat, l_stable)


def fixed_vectors(a: Action, w: LatticeWindow, m_hat: Subspace | None = None):
    """Window fixed space F of the action, and F ∩ m_hat.

    F is cut out by exact linear conditions: for every generator and
    every tap write that lands below t^hi — including below the window
    floor — the written coefficient (a sum of in-window reads) must
    vanish.  Returns the pair (F, F ∩ m_hat); with no m_hat the second
    component is F itself.
    """
    rows = fixed_condition_rows(a, w)
    if rows:
        f = kernel(FpMatrix(w.p, np.array(rows, dtype=np.int64)))
    else:
        f = Subspace.full(w.p, w.dim)
    meet = f.intersect(m_hat) if m_hat is not None else f
    return f, meet


def _coord_valuation(row: np.ndarray, w: LatticeWindow) -> int:
    """Lowest exponent carrying a nonzero coordinate (any component)."""
    exps = [w.lo + (i % w.width) for i in np.nonzero(row)[0]]
    return min(exps)


@dataclass(frozen=True)
class FixedPointCertificate:
    """A nonzero witness with exact re-verification data.

    checked_generators lists (k, residual_zero) for every monomial
    exponent k whose generator can move the witness below the stated
    precision; in_m_hat / outside_t_m_hat record where the witness sits
    relative to the invariant subspace chain.
    """

    witness: SeriesVector
    precision: int
    checked_generators: tuple[tuple[int, bool], ...]
    in_m_hat: bool
    outside_t_m_hat: bool
    window: LatticeWindow

    @property
    def ok(self) -> bool:
        return (not self.witness.is_zero) and all(z for _, z in self.checked_generators)

    def to_dict(self) -> dict:
        return {
            "witness": [format_series(self.witness.component(i)) for i in range(1, self.witness.d + 1)],
            "precision": self.precision,
            "checked_generators": [[k, z] for k, z in self.checked_generators],
            "in_m_hat": self.in_m_hat,
            "outside_t_m_hat": self.outside_t_m_hat,
            "window": {"lo": self.window.lo, "hi": self.window.hi},
            "ok": self.ok,
        }


def extract_witness(a: Action, chain: InvariantChain, precision: int | None = None) -> FixedPointCertificate:
    """Pick and certify a nonzero fixed vector inside m_hat.

    Selection is deterministic: among canonical basis vectors of
    F ∩ m_hat, prefer those outside t*m_hat, then take the one of
    minimal valuation, breaking ties by lexicographically least
    coordinates.  Verification never reuses the matrices that produced
    F: each check applies the action to the lifted series afresh.
    """
    w = chain.window
    n = precision if precision is not None else w.hi - a.drop
    if n < 1 or n > w.hi:
        wider = widen_window(w)
        raise WindowTooNarrow(
            f"precision {n} not representable on window [{w.lo},{w.hi})",
            suggestion=f"retry with window [{wider.lo},{wider.hi})",
        )
    _, meet = fixed_vectors(a, w, chain.m_hat)
    if meet.dim == 0:
        wider = widen_window(w)
        raise EmptyFixedSpace(
            f"no nonzero fixed vectors inside m_hat on window [{w.lo},{w.hi})",
            suggestion=f"retry with window [{wider.lo},{wider.hi}) or larger l_max",
        )
    t_m_hat = map_image(shift_matrix(w), chain.m_hat)
    rows = list(meet.basis.a)
    outside = [r for r in rows if not t_m_hat.contains_vector(r)]
    pool = outside if outside else rows
    pick = min(pool, key=lambda r: (_coord_valuation(r, w), tuple(int(x) for x in r)))
    lifted = coords_to_vector(pick, w)
    witness = lifted.truncate(n)
    if witness.is_zero:
        wider = widen_window(w)
        raise EmptyFixedSpace(
            f"every fixed vector found vanishes mod t^{n}",
            suggestion=f"retry with window [{wider.lo},{wider.hi})",
        )
    checks = []
    if not a.seed.is_zero:
        threshold = a.modulus.threshold(n)
        for k in range(-a.max_in_exp, threshold):
            x = LaurentSeries.t_power(a.p, k, prec=max(k + 1, threshold))
            moved = apply_phi(a, x, lifted, out_prec=n)
            checks.append((k, moved == witness))
    return FixedPointCertificate(
        witness=witness,
        precision=n,
        checked_generators=tuple(checks),
        in_m_hat=chain.m_hat.contains_vector(pick),
        outside_t_m_hat=not t_m_hat.contains_vector(pick),
        window=w,
    )


@dataclass(frozen=True)
class LemmaChain:
    """Nested invariant subspaces V_n inside one quotient representation.

    `rep` acts on the quotient of the deepest shifted copy of m_hat by
    m_hat itself; `nested` holds the images of the shallower copies,
    strictly increasing.  Feed both to replab.dichotomy_probe.
    """

    rep: FiniteRep
    nested: tuple[Subspace, ...]
    space: QuotientSpace
    window: LatticeWindow
    n_max: int

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "window": {"lo": self.window.lo, "hi": self.window.hi},
            "quotient_dim": self.space.dim,
            "generator_count": self.rep.r,
            "nested_dims": [s.dim for s in self.nested],
        }


def lemma_chain_from_action(a: Action, chain: InvariantChain, n_max: int) -> LemmaChain:
    """Build V_n = (t^-n * m_hat) / m_hat for n = 1..n_max with its action.

    The copies are compared on a sub-window cut below the top so that
    every t^-n shift of m_hat is represented faithfully; the acting
    generators are the finitely many that move something there.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    w = chain.window
    h_cut = w.hi - n_max
    if h_cut < 1:
        raise WindowTooNarrow(
            f"window top {w.hi} cannot host {n_max} downward shifts and the base copy"
        )
    if w.lo > -n_max - a.max_in_exp:
        raise WindowTooNarrow(
            f"window floor {w.lo} too high for t^-{n_max} shifts (need <= {-n_max - a.max_in_exp})"
        )
    wp = LatticeWindow(w.lo, h_cut, a.d, a.p)
    copies = []
    for n in range(n_max + 1):
        tau = monomial_transfer(w, wp, -n)
        copies.append(map_image(tau, chain.m_hat))
    for n in range(n_max):
        if not copies[n + 1].contains(copies[n]):
            raise ChainInvariantViolation(f"t^-{n} copy is not inside the t^-{n + 1} copy")
    q = quotient(copies[n_max], copies[0])
    ident = FpMatrix.identity(a.p, q.dim)
    gens = []
    for k, mat in generator_matrices(a, max(0, n_max + a.max_in_exp), wp):
        try:
            induced = q.induced(mat)
        except InvalidQuotient as exc:
            raise ChainInvariantViolation(
                f"generator at t^{k} does not preserve the shifted chain: {exc}"
            ) from exc
        if induced != ident:
            gens.append(induced)
    rep = FiniteRep(a.p, q.dim, gens, label=a.spec.label or "lemma-chain")
    nested = tuple(
        Subspace.from_rows(a.p, q.dim, [q.project(row) for row in copies[n].basis.a])
        for n in range(1, n_max + 1)
    )
    return LemmaChain(rep, nested, q, wp, n_max)


def default_window(a: Action, precision: int, l_max: int, n_max: int = 0) -> LatticeWindow:
    """Window sizing policy: floor covers the generator depth, top covers
    the requested precision, both padded by the seed's drop."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    depth = max(l_max, n_max + a.max_in_exp if n_max else 0)
    return LatticeWindow(-(depth + a.drop), precision + a.drop, a.d, a.p)


def widen_window(w: LatticeWindow) -> LatticeWindow:
    """One widening step: double both margins (from at least 1)."""
    return LatticeWindow(-2 * max(-w.lo, 1), 2 * max(w.hi, 1), w.d, w.p)


def find_fixed_point(
    a: Action,
    precision: int,
    l_max: int,
    window: LatticeWindow | None = None,
) -> tuple[InvariantChain, FixedPointCertificate]:
    """End-to-end pipeline: chain, fixed space, certified witness.

    With the default window sizing, a window-too-narrow or insufficient-
    precision failure triggers one automatic retry on a doubled window;
    an explicitly supplied window is used as given.
    """
    w = window if window is not None else default_window(a, precision, l_max)
    try:
        chain = m_ell_chain(a, l_max, w)
        return chain, extract_witness(a, chain, precision)
    except (WindowTooNarrow, InsufficientPrecision):
        if window is not None:
            raise
        w = widen_window(w)
        chain = m_ell_chain(a, l_max, w)
        return chain, extract_witness(a, chain, precision)
