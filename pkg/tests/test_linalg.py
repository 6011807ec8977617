"""Exact linear algebra over F_p: rref, kernels, subspaces, quotients.

Derived expectations in this file were computed by brute enumeration
(every vector of the ambient space is checked) before being frozen in,
so each test is backed by an independent oracle, not by the code under
test.
"""

import random

import numpy as np
import pytest

from equifix.errors import DimensionMismatch, InvalidQuotient
from equifix.linalg import (
    FpMatrix,
    Subspace,
    check_prime,
    inverse,
    kernel,
    map_image,
    map_preimage,
    quotient,
    rref,
)


def all_vectors(p, dim):
    """Every vector of F_p^dim, as a list of int64 arrays."""
    out = []
    for idx in range(p**dim):
        v = []
        n = idx
        for _ in range(dim):
            v.append(n % p)
            n //= p
        out.append(np.array(v, dtype=np.int64))
    return out


def span_by_enumeration(p, dim, rows):
    """Oracle: the set of vectors obtainable as F_p-combinations of rows."""
    vecs = {tuple(np.zeros(dim, dtype=np.int64))}
    for coeffs in all_vectors(p, len(rows)):
        acc = np.zeros(dim, dtype=np.int64)
        for c, r in zip(coeffs, rows):
            acc = (acc + c * np.asarray(r, dtype=np.int64)) % p
        vecs.add(tuple(int(x) for x in acc))
    return vecs


def subspace_vector_set(s):
    return span_by_enumeration(s.p, s.ambient_dim, list(s.basis.a))


# ---------------------------------------------------------------- primes


def test_check_prime_accepts_small_primes():
    for p in (2, 3, 5, 7, 97):
        assert check_prime(p) == p


def test_check_prime_rejects_composites_and_out_of_range():
    for bad in (0, 1, 4, 6, 9, 91, 101):
        with pytest.raises(ValueError):
            check_prime(bad)


# ---------------------------------------------------------------- rref


def test_rref_nilpotent_2x2():
    # Enumerating the 4 row-space vectors of [[0,1],[0,0]] over F_2 gives
    # {(0,0),(0,1)}: rank 1, single pivot in column 1.
    red = rref(FpMatrix(2, [[0, 1], [0, 0]]))
    assert red.rank == 1
    assert red.pivots == (1,)
    assert red.matrix.a.tolist() == [[0, 1], [0, 0]]


def test_rref_idempotent_and_row_space_preserved():
    rng = random.Random(401)
    for _ in range(60):
        p = rng.choice([2, 3, 5])
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
        red = rref(m)
        again = rref(red.matrix)
        assert red.matrix == again.matrix and red.rank == again.rank
        assert span_by_enumeration(p, cols, list(m.a)) == span_by_enumeration(
            p, cols, list(red.matrix.a)
        )


def test_rank_nullity_on_random_matrices():
    rng = random.Random(402)
    for _ in range(80):
        p = rng.choice([2, 3, 5])
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
        assert kernel(m).dim + rref(m).rank == cols


# ---------------------------------------------------------------- kernel


def test_kernel_of_shifted_jordan_block():
    # Oracle: of the 4 vectors of F_2^2, exactly (0,0) and (1,0) are
    # annihilated by [[0,1],[0,0]].
    m = FpMatrix(2, [[0, 1], [0, 0]])
    annihilated = {
        tuple(int(x) for x in v) for v in all_vectors(2, 2) if not (m.a @ v % 2).any()
    }
    assert annihilated == {(0, 0), (1, 0)}
    ker = kernel(m)
    assert subspace_vector_set(ker) == annihilated
    assert ker.basis.a.tolist() == [[1, 0]]


def test_kernel_matches_enumeration_oracle():
    rng = random.Random(403)
    for _ in range(60):
        p = rng.choice([2, 3])
        rows, cols = rng.randint(1, 3), rng.randint(1, 4)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
        expected = {
            tuple(int(x) for x in v)
            for v in all_vectors(p, cols)
            if not (m.a @ v % p).any()
        }
        assert subspace_vector_set(kernel(m)) == expected


# ---------------------------------------------------------------- subspaces


def test_sum_of_coordinate_lines_is_plane():
    u = Subspace.from_rows(2, 2, [[1, 0]])
    v = Subspace.from_rows(2, 2, [[0, 1]])
    assert u.sum(v) == Subspace.full(2, 2)


def test_intersection_of_coordinate_planes():
    # Oracle: of the 8 vectors of F_2^3, those in both spans are exactly
    # the multiples of (0,1,0).
    u = Subspace.from_rows(2, 3, [[1, 0, 0], [0, 1, 0]])
    w = Subspace.from_rows(2, 3, [[0, 1, 0], [0, 0, 1]])
    both = subspace_vector_set(u) & subspace_vector_set(w)
    assert both == {(0, 0, 0), (0, 1, 0)}
    meet = u.intersect(w)
    assert subspace_vector_set(meet) == both
    assert meet.basis.a.tolist() == [[0, 1, 0]]


def test_intersection_matches_enumeration_oracle():
    rng = random.Random(404)
    for _ in range(40):
        p = rng.choice([2, 3])
        dim = rng.randint(1, 4)
        u = Subspace.from_rows(
            p, dim, [[rng.randrange(p) for _ in range(dim)] for _ in range(2)]
        )
        w = Subspace.from_rows(
            p, dim, [[rng.randrange(p) for _ in range(dim)] for _ in range(2)]
        )
        assert subspace_vector_set(u.intersect(w)) == (
            subspace_vector_set(u) & subspace_vector_set(w)
        )


def test_canonical_basis_ignores_generating_set_presentation():
    rng = random.Random(405)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(2, 5)
        rows = [[rng.randrange(p) for _ in range(dim)] for _ in range(3)]
        s = Subspace.from_rows(p, dim, rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        rescaled = []
        for row in shuffled:
            unit = rng.randrange(1, p)
            rescaled.append([(c * unit) % p for c in row])
        # also throw in a random sum of two generators
        rescaled.append([(a + b) % p for a, b in zip(rows[0], rows[1])])
        assert Subspace.from_rows(p, dim, rescaled) == s


def test_modular_law_inclusion():
    rng = random.Random(406)
    for _ in range(40):
        p = rng.choice([2, 3])
        dim = rng.randint(2, 4)

        def rand_space():
            return Subspace.from_rows(
                p, dim, [[rng.randrange(p) for _ in range(dim)] for _ in range(2)]
            )

        u, v, w = rand_space(), rand_space(), rand_space()
        lhs = u.intersect(w).sum(v.intersect(w))
        rhs = u.sum(v).intersect(w)
        assert rhs.contains(lhs)


def test_contains_vector_and_coordinates_round_trip():
    rng = random.Random(407)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 5)
        s = Subspace.from_rows(
            p, dim, [[rng.randrange(p) for _ in range(dim)] for _ in range(3)]
        )
        if s.dim == 0:
            continue
        coeffs = [rng.randrange(p) for _ in range(s.dim)]
        v = np.zeros(dim, dtype=np.int64)
        for c, row in zip(coeffs, s.basis.a):
            v = (v + c * row) % p
        assert s.contains_vector(v)
        assert s.coordinates(v).tolist() == coeffs


def test_coordinates_rejects_outside_vector():
    s = Subspace.from_rows(2, 2, [[1, 0]])
    with pytest.raises(DimensionMismatch):
        s.coordinates([0, 1])


def test_zero_dimensional_ambient_spaces():
    assert Subspace.full(2, 0) == Subspace.zero(2, 0)
    assert Subspace.full(2, 0).dim == 0
    assert kernel(FpMatrix(2, np.zeros((0, 0), dtype=np.int64))).dim == 0


# ---------------------------------------------------------------- maps


def test_image_of_line_under_nilpotent_map():
    # Oracle: the map sends (0,0) -> (0,0) and (1,0) -> (0,0); the whole
    # line collapses.
    m = FpMatrix(2, [[0, 1], [0, 0]])
    line = Subspace.from_rows(2, 2, [[1, 0]])
    assert map_image(m, line) == Subspace.zero(2, 2)
    # ... while the other coordinate line maps onto the first.
    other = Subspace.from_rows(2, 2, [[0, 1]])
    assert map_image(m, other) == line


def test_image_and_preimage_against_enumeration():
    rng = random.Random(408)
    for _ in range(40):
        p = rng.choice([2, 3])
        dim = rng.randint(1, 4)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(dim)] for _ in range(dim)])
        s = Subspace.from_rows(
            p, dim, [[rng.randrange(p) for _ in range(dim)] for _ in range(2)]
        )
        imset = {
            tuple(int(x) for x in (m.a @ np.array(v) % p))
            for v in subspace_vector_set(s)
        }
        # the image of a subspace is spanned by images of basis vectors
        assert subspace_vector_set(map_image(m, s)) == span_by_enumeration(
            p, dim, [np.array(v) for v in imset]
        )
        pre = map_preimage(m, s)
        expected_pre = {
            tuple(int(x) for x in v)
            for v in all_vectors(p, dim)
            if tuple(int(x) for x in (m.a @ v % p)) in subspace_vector_set(s)
        }
        assert subspace_vector_set(pre) == expected_pre


def test_inverse_round_trips():
    rng = random.Random(409)
    found = 0
    while found < 20:
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 4)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(dim)] for _ in range(dim)])
        if rref(m).rank < dim:
            continue
        found += 1
        assert m @ inverse(m) == FpMatrix.identity(p, dim)
        assert inverse(m) @ m == FpMatrix.identity(p, dim)


def test_inverse_rejects_singular():
    with pytest.raises(DimensionMismatch):
        inverse(FpMatrix(2, [[1, 1], [1, 1]]))


# ---------------------------------------------------------------- quotients


def test_quotient_plane_by_line():
    # Oracle: F_2^2 / span{(1,0)} has the 2 cosets {(0,0),(1,0)} and
    # {(0,1),(1,1)}; one dimension survives with representative (0,1).
    q = quotient(Subspace.full(2, 2), Subspace.from_rows(2, 2, [[1, 0]]))
    assert q.dim == 1
    assert q.project([0, 1]).tolist() == [1]
    assert q.project([1, 0]).tolist() == [0]
    assert q.lift([1]).tolist() == [0, 1]


def test_quotient_by_self_is_zero_dimensional():
    v = Subspace.from_rows(3, 3, [[1, 0, 0], [0, 1, 0]])
    assert quotient(v, v).dim == 0


def test_quotient_project_is_linear_and_kills_modded():
    rng = random.Random(410)
    for _ in range(30):
        p = rng.choice([2, 3])
        dim = rng.randint(2, 4)
        sub = Subspace.from_rows(
            p, dim, [[rng.randrange(p) for _ in range(dim)] for _ in range(1)]
        )
        q = quotient(Subspace.full(p, dim), sub)
        for v in subspace_vector_set(sub):
            assert not q.project(np.array(v)).any()
        a = np.array([rng.randrange(p) for _ in range(dim)], dtype=np.int64)
        b = np.array([rng.randrange(p) for _ in range(dim)], dtype=np.int64)
        assert q.project((a + b) % p).tolist() == (
            (q.project(a) + q.project(b)) % p
        ).tolist()


def test_quotient_induced_rejects_nonpreserving_map():
    q = quotient(Subspace.full(2, 2), Subspace.from_rows(2, 2, [[1, 0]]))
    # this map sends the modded line outside itself
    swap = FpMatrix(2, [[0, 1], [1, 0]])
    with pytest.raises(InvalidQuotient):
        q.induced(swap)


def test_quotient_requires_containment():
    with pytest.raises(InvalidQuotient):
        quotient(
            Subspace.from_rows(2, 2, [[1, 0]]),
            Subspace.from_rows(2, 2, [[0, 1]]),
        )
