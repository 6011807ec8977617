"""Independent brute-force checks for the linear-algebra layer.

Everything here recomputes answers the cheap way — enumerating vectors
or subspaces outright — so the production routines (fixed_space,
max_invariant_subspace) can be validated against code that shares no
logic with them.  Budgets keep the enumerations from silently eating
hours; exceeding one raises BudgetExceeded rather than degrading.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch
from .linalg import FpMatrix, Subspace, map_image


@dataclass(frozen=True)
class EnumerationBudget:
    """Caps for oracle search sizes (counts, not bytes)."""

    max_vectors: int = 1 << 20
    max_subspaces: int = 1 << 22


DEFAULT_BUDGET = EnumerationBudget()


def _all_vectors(p: int, dim: int, budget: EnumerationBudget) -> np.ndarray:
    total = p**dim
    if total > budget.max_vectors:
        raise BudgetExceeded(f"{total} vectors exceeds budget {budget.max_vectors}")
    # Row i spells i in base p, least significant digit first.
    idx = np.arange(total, dtype=np.int64)
    cols = []
    for _ in range(dim):
        cols.append(idx % p)
        idx //= p
    if cols:
        return np.stack(cols, axis=1)
    return np.zeros((1, 0), dtype=np.int64)


def brute_fixed(p: int, dim: int, generators, budget: EnumerationBudget = DEFAULT_BUDGET) -> Subspace:
    """Common fixed vectors of the generators, by checking every vector."""
    vs = _all_vectors(p, dim, budget)
    mask = np.ones(len(vs), dtype=bool)
    for g in generators:
        if g.p != p or g.shape != (dim, dim):
            raise DimensionMismatch("generator does not act on F_p^dim")
        mask &= ((vs @ g.a.T) % p == vs).all(axis=1)
    picked = vs[mask]
    # The survivors form a subspace, so folding them in row-cap-sized
    # chunks loses nothing and keeps each rref inside the matrix limits.
    result = Subspace.zero(p, dim)
    for at in range(0, len(picked), 256):
        result = result.sum(Subspace.from_rows(p, dim, picked[at : at + 256]))
    return result


def count_subspaces(p: int, dim: int, k: int) -> int:
    """Gaussian binomial [dim choose k]_p, computed exactly."""
    if k < 0 or k > dim:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (dim - i) - 1
        den *= p ** (i + 1) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(p: int, dim: int, budget: EnumerationBudget = DEFAULT_BUDGET):
    """Yield every subspace of F_p^dim once, as canonical Subspace objects.

    Construction is direct: for each rank k and pivot-column choice,
    fill the free entries of the reduced row echelon form in all ways.
    No Gaussian elimination happens, so agreement of the count with
    count_subspaces is a real check on both sides.
    """
    total = sum(count_subspaces(p, dim, k) for k in range(dim + 1))
    if total > budget.max_subspaces:
        raise BudgetExceeded(f"{total} subspaces exceeds budget {budget.max_subspaces}")
    yield Subspace.zero(p, dim)
    for k in range(1, dim + 1):
        for pivots in itertools.combinations(range(dim), k):
            # Free positions: to the right of each pivot, skipping later
            # pivot columns.
            free: list[tuple[int, int]] = []
            for r, pc in enumerate(pivots):
                for c in range(pc + 1, dim):
                    if c not in pivots:
                        free.append((r, c))
            base = np.zeros((k, dim), dtype=np.int64)
            for r, pc in enumerate(pivots):
                base[r, pc] = 1
            for fill in itertools.product(range(p), repeat=len(free)):
                m = base.copy()
                for (r, c), value in zip(free, fill):
                    m[r, c] = value
                # Already in reduced echelon form by construction, so the
                # raw constructor is safe (and keeps elimination out of
                # this code path).
                yield Subspace(p, dim, FpMatrix(p, m))


def brute_max_invariant(
    p: int,
    dim: int,
    generators,
    ambient: Subspace | None = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> Subspace:
    """Largest subspace of `ambient` mapped into itself by every generator.

    Walks all subspaces, keeps the invariant ones inside `ambient`, and
    returns the one of top dimension — verifying along the way that it
    contains every other invariant subspace found (the maximum is a
    union, so this must hold; a failure means a bug in the caller's
    premises, and raises).
    """
    if ambient is None:
        ambient = Subspace.full(p, dim)
    invariant: list[Subspace] = []
    for s in enumerate_subspaces(p, dim, budget):
        if not ambient.contains(s):
            continue
        if all(s.contains(map_image(g, s)) for g in generators):
            invariant.append(s)
    best = max(invariant, key=lambda s: s.dim)
    for s in invariant:
        if not best.contains(s):
            raise AssertionError("invariant subspaces are not closed under sum here")
    return best
