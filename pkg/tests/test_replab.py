"""Finite commuting unipotent representations and the fixed-part bound.

Jordan-block expectations below were derived by enumerating every
vector of the small ambient spaces (4 for F_2^2, 27 for F_3^3, 16 for
F_2^4) and keeping the ones each generator leaves alone, before the
library result was trusted.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

from equifix.errors import (
    ChainInvariantViolation,
    DimensionMismatch,
    NonCommuting,
    NotOrderP,
)
from equifix.linalg import FpMatrix, Subspace
from equifix.replab import (
    FiniteRep,
    dichotomy_probe,
    fixed_bound_check,
    fixed_space,
    kernel_filtration,
    quotient_rep,
    random_commuting_rep,
    random_order_p_matrix,
    restrict_rep,
)


def jordan(p, size):
    """Unipotent Jordan block: ones on the diagonal and superdiagonal."""
    a = np.eye(size, dtype=np.int64) + np.eye(size, k=1, dtype=np.int64)
    return FpMatrix(p, a % p)


def blocks(p, *sizes):
    n = sum(sizes)
    a = np.zeros((n, n), dtype=np.int64)
    at = 0
    for s in sizes:
        a[at : at + s, at : at + s] = jordan(p, s).a
        at += s
    return FpMatrix(p, a)


def brute_fixed_vectors(p, gens):
    """Oracle: all vectors fixed by every generator, found one by one."""
    dim = gens[0].rows if gens else 0
    out = []
    for idx in range(p**dim):
        v, n = [], idx
        for _ in range(dim):
            v.append(n % p)
            n //= p
        v = np.array(v, dtype=np.int64)
        if all((g.a @ v % p == v).all() for g in gens):
            out.append(tuple(int(x) for x in v))
    return set(out)


# ---------------------------------------------------------------- FiniteRep


def test_rep_validates_order():
    not_order_2 = FpMatrix(2, [[1, 1], [1, 0]])
    with pytest.raises(NotOrderP):
        FiniteRep(2, 2, [not_order_2])


def test_rep_validates_commutation():
    g1 = blocks(2, 2, 1)  # raises e2 into e1, leaves e3
    bad = FpMatrix(2, [[1, 0, 0], [1, 1, 0], [0, 0, 1]])  # pushes e1 into e2
    FiniteRep(2, 3, [g1, g1])  # sanity: commuting pair accepted
    with pytest.raises(NonCommuting) as info:
        FiniteRep(2, 3, [g1, bad])
    assert info.value.offsets == (0, 1)


def test_rep_caps_generator_count():
    ident = FpMatrix.identity(2, 2)
    with pytest.raises(DimensionMismatch):
        FiniteRep(2, 2, [ident] * 7)


# ---------------------------------------------------------------- fixed space


def test_trivial_rep_fixes_everything():
    rep = FiniteRep(3, 4, [FpMatrix.identity(3, 4)] * 2)
    assert fixed_space(rep) == Subspace.full(3, 4)


def test_jordan_2_fixed_line():
    g = jordan(2, 2)
    assert brute_fixed_vectors(2, [g]) == {(0, 0), (1, 0)}
    rep = FiniteRep(2, 2, [g])
    f = fixed_space(rep)
    assert f.dim == 1 and f.basis.a.tolist() == [[1, 0]]


def test_two_generator_fixed_space_with_identity():
    rep = FiniteRep(2, 4, [blocks(2, 2, 2), FpMatrix.identity(2, 4)])
    f = fixed_space(rep)
    assert f.dim == 2
    assert brute_fixed_vectors(2, list(rep.generators)) == {
        tuple(int(x) for x in (c1 * f.basis.a[0] + c2 * f.basis.a[1]) % 2)
        for c1 in range(2)
        for c2 in range(2)
    }


def test_fixed_space_matches_oracle_on_random_reps():
    rng = random.Random(450)
    for _ in range(20):
        p = rng.choice([2, 3])
        dim = rng.randint(1, 4 if p == 3 else 6)
        r = rng.randint(1, 2)
        rep = random_commuting_rep(rng, p, dim, r)
        f = fixed_space(rep)
        expected = brute_fixed_vectors(p, list(rep.generators))
        got = set()
        for idx in range(p**f.dim):
            coeffs, n = [], idx
            for _ in range(f.dim):
                coeffs.append(n % p)
                n //= p
            acc = np.zeros(dim, dtype=np.int64)
            for c, row in zip(coeffs, f.basis.a):
                acc = (acc + c * row) % p
            got.add(tuple(int(x) for x in acc))
        assert got == expected


# ---------------------------------------------------------------- filtration


def test_filtration_of_jordan_3():
    rep = kernel_filtration(jordan(3, 3), 3)
    assert rep.dims == (0, 1, 2, 3)
    assert rep.differences == (1, 1, 1)
    assert rep.concave and rep.exhausts and rep.bound_ok
    assert rep.fixed_dim == 1
    assert rep.lower_bound == Fraction(3, 3)


def test_filtration_of_paired_blocks():
    rep = kernel_filtration(blocks(2, 2, 2), 2)
    assert rep.dims == (0, 2, 4)
    assert rep.differences == (2, 2)
    assert rep.concave and rep.exhausts
    assert rep.fixed_dim == 2 and rep.lower_bound == Fraction(4, 2)


def test_filtration_laws_on_random_generators():
    rng = random.Random(451)
    for _ in range(60):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 6)
        g = random_order_p_matrix(rng, p, dim)
        rep = kernel_filtration(g, p)
        assert rep.exhausts  # (g - id)^p = 0 forces d(p) = dim
        assert rep.concave  # increments never grow
        assert rep.fixed_dim * p >= dim  # d(1) >= dim / p


# ---------------------------------------------------------------- bound


def test_bound_single_jordan_block():
    check = fixed_bound_check(FiniteRep(2, 2, [jordan(2, 2)]))
    assert check.ok
    assert check.fixed_dim == 1 and check.lower_bound == Fraction(2, 2)


def test_bound_tight_two_generator_example():
    # g1 fixes span{e1, e3}, g2 fixes span{e1, e2}; together only e1
    # survives, exactly matching the 4/2^2 floor.
    g1 = blocks(2, 2, 2)
    g2 = FpMatrix(
        2, [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]
    )
    rep = FiniteRep(2, 4, [g1, g2])
    f = fixed_space(rep)
    assert f.dim == 1 and f.basis.a.tolist() == [[1, 0, 0, 0]]
    assert brute_fixed_vectors(2, [g1, g2]) == {(0, 0, 0, 0), (1, 0, 0, 0)}
    check = fixed_bound_check(rep)
    assert check.ok and check.lower_bound == Fraction(1, 1)


def test_bound_on_random_commuting_tuples():
    rng = random.Random(452)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        r = rng.randint(1, 3)
        dim = rng.randint(1, 8)
        rep = random_commuting_rep(rng, p, dim, r)
        assert fixed_bound_check(rep).ok


# ---------------------------------------------------------------- sub/quotient


def test_restrict_jordan_3_to_invariant_plane():
    rep = FiniteRep(3, 3, [jordan(3, 3)])
    sub = restrict_rep(rep, Subspace.from_rows(3, 3, [[1, 0, 0], [0, 1, 0]]))
    assert sub.dim == 2
    assert sub.generators[0].a.tolist() == [[1, 1], [0, 1]]


def test_restrict_rejects_noninvariant_subspace():
    rep = FiniteRep(2, 2, [jordan(2, 2)])
    with pytest.raises(ChainInvariantViolation):
        restrict_rep(rep, Subspace.from_rows(2, 2, [[0, 1]]))


def test_quotient_by_zero_subspace_keeps_matrices():
    rep = FiniteRep(3, 3, [jordan(3, 3)])
    q = quotient_rep(rep, Subspace.zero(3, 3))
    assert q.dim == 3
    assert q.generators[0].a.tolist() == jordan(3, 3).a.tolist()


def test_quotient_jordan_2_by_fixed_line_is_trivial():
    rep = FiniteRep(2, 2, [jordan(2, 2)])
    q = quotient_rep(rep, fixed_space(rep))
    assert q.dim == 1
    assert q.generators[0].a.tolist() == [[1]]


def test_quotient_jordan_3_by_fixed_line_is_jordan_2():
    rep = FiniteRep(3, 3, [jordan(3, 3)])
    q = quotient_rep(rep, fixed_space(rep))
    assert q.dim == 2
    assert q.generators[0].a.tolist() == [[1, 1], [0, 1]]


# ---------------------------------------------------------------- dichotomy


def test_dichotomy_probe_block_chain():
    # g = J2+J2+J2 on F_2^6 with V_n = first 2n coordinates: each step
    # adds one block, one fixed line, and keeps the bound 2n/2 tight.
    rep = FiniteRep(2, 6, [blocks(2, 2, 2, 2)])
    chain = [
        Subspace.from_rows(2, 6, np.eye(6, dtype=np.int64)[: 2 * n]) for n in (1, 2, 3)
    ]
    report = dichotomy_probe(rep, chain)
    assert report.ok
    assert [(row.total_dim, row.fixed_dim) for row in report.rows] == [
        (2, 1),
        (4, 2),
        (6, 3),
    ]
    assert [row.quotient_fixed_dim for row in report.rows] == [1, 2, 3]
    assert [row.lower_bound for row in report.rows] == [
        Fraction(1),
        Fraction(2),
        Fraction(3),
    ]


def test_dichotomy_probe_rejects_loose_chains():
    rep = FiniteRep(2, 4, [blocks(2, 2, 2)])
    v = Subspace.from_rows(2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    with pytest.raises(ChainInvariantViolation):
        dichotomy_probe(rep, [v, v])  # not strictly increasing
    w = Subspace.from_rows(2, 4, [[0, 1, 0, 0]])
    with pytest.raises(ChainInvariantViolation):
        dichotomy_probe(rep, [w])  # member not invariant


# ---------------------------------------------------------------- generators


def test_random_commuting_rep_shape():
    rng = random.Random(453)
    rep = random_commuting_rep(rng, 3, 7, 3)
    assert (rep.p, rep.dim, rep.r) == (3, 7, 3)
    # construction already certified order and commutation; spot-check
    ident = FpMatrix.identity(3, 7)
    for g in rep.generators:
        assert g**3 == ident


def test_random_order_p_matrix_has_order_p():
    rng = random.Random(454)
    for _ in range(30):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 6)
        g = random_order_p_matrix(rng, p, dim)
        assert g**p == FpMatrix.identity(p, dim)
