import random
from itertools import product

import pytest

from quiverhall.errors import ShapeError
from quiverhall.linalg import (
    FpMatrix,
    echelon_subspaces,
    field_inverse,
    gaussian_binomial,
)


def brute_force_inverse(x, p):
    for y in range(1, p):
        if (x * y) % p == 1:
            return y
    raise AssertionError("no inverse found")


def test_field_inverse_examples():
    assert field_inverse(1, 5) == 1
    assert field_inverse(2, 5) == 3
    # derived: scan residues 1..6 for the product congruent to 1
    assert brute_force_inverse(4, 7) == 2
    assert field_inverse(4, 7) == 2


def test_field_inverse_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field_inverse(0, 5)


def test_field_inverse_bijection_involution():
    for p in (2, 3, 5):
        images = set()
        for x in range(1, p):
            y = field_inverse(x, p)
            assert (x * y) % p == 1
            assert field_inverse(y, p) == x
            images.add(y)
        assert images == set(range(1, p))


def test_kernel_identity_empty():
    assert FpMatrix.identity(2, 3).kernel_basis() == []


def test_kernel_zero_matrix():
    K = FpMatrix.zero(3, 2, 3).kernel_basis()
    assert len(K) == 3


def test_kernel_rank_one_derived():
    M = FpMatrix(2, [[1, 1], [1, 1]])
    # oracle: brute force over all 4 vectors of F_2^2
    expected = [v for v in product(range(2), repeat=2)
                if all(x == 0 for x in M.mul_vec(v)) and any(v)]
    assert expected == [(1, 1)]
    assert M.kernel_basis() == [(1, 1)]


def test_solve_identity():
    M = FpMatrix.identity(5, 3)
    assert M.solve((1, 2, 3)) == (1, 2, 3)


def test_solve_inconsistent():
    M = FpMatrix.zero(3, 2, 2)
    assert M.solve((1, 0)) is None


def test_solve_deterministic_representative():
    M = FpMatrix(2, [[1, 1]])
    # oracle: enumerate all four candidates
    sols = [v for v in product(range(2), repeat=2)
            if M.mul_vec(v) == (1,)]
    assert set(sols) == {(1, 0), (0, 1)}
    # free variable set to zero picks (1, 0)
    assert M.solve((1,)) == (1, 0)


def test_solve_shape_error():
    with pytest.raises(ShapeError):
        FpMatrix.identity(2, 2).solve((1, 0, 0))


def test_rank_nullity_seeded():
    rng = random.Random(3)
    for _ in range(200):
        p = rng.choice((2, 3))
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        M = FpMatrix(p, [[rng.randrange(p) for _ in range(c)] for _ in range(r)])
        assert M.rank() + len(M.kernel_basis()) == c


def test_inverse_matrix():
    M = FpMatrix(5, [[2, 1], [1, 1]])
    I = M @ M.inverse()
    assert I == FpMatrix.identity(5, 2)


def test_echelon_subspace_count_matches_gaussian_binomial():
    for p in (2, 3):
        for n in range(4):
            for d in range(n + 1):
                subs = list(echelon_subspaces(p, n, d))
                assert len(subs) == gaussian_binomial(n, d, p)
                assert len(set(subs)) == len(subs)


def test_lines_in_f2_squared():
    # q + 1 = 3 lines
    assert gaussian_binomial(2, 1, 2) == 3
    assert len(list(echelon_subspaces(2, 2, 1))) == 3
