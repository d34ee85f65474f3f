"""Exact linear algebra over the scalar backends."""

import itertools
import random
from fractions import Fraction

import pytest

import oracles
from geonorm import linalg
from geonorm.field import TADIC, TRIVIAL, RatFunc


def _rand_matrix(rng, d):
    return [[Fraction(rng.randint(-4, 4)) for _ in range(d)] for _ in range(d)]


def _perm_det(A):
    # Leibniz expansion; fine for d <= 4
    d = len(A)
    total = Fraction(0)
    for perm in itertools.permutations(range(d)):
        sign = 1
        for i in range(d):
            for j in range(i + 1, d):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = Fraction(1)
        for i in range(d):
            prod *= A[i][perm[i]]
        total += sign * prod
    return total


def test_rank_against_oracle_random() -> None:
    rng = random.Random(3)
    for _ in range(100):
        d = rng.randint(1, 4)
        rows = [[Fraction(rng.randint(-2, 2)) for _ in range(d)]
                for _ in range(rng.randint(1, 5))]
        assert linalg.rank(rows) == oracles.rank(rows)


def test_determinant_against_leibniz_random() -> None:
    rng = random.Random(5)
    for _ in range(100):
        A = _rand_matrix(rng, rng.randint(1, 4))
        assert linalg.determinant(A) == _perm_det(A)


def test_determinant_tadic() -> None:
    t = RatFunc.t_power
    A = [[t(1), TADIC.zero], [TADIC.one, t(-2)]]
    assert linalg.determinant(A) == t(-1)
    assert TADIC.valuation(linalg.determinant(A)) == -1


def test_invert_round_trip_random() -> None:
    rng = random.Random(9)
    seen = 0
    while seen < 50:
        A = _rand_matrix(rng, rng.randint(1, 4))
        try:
            inv = linalg.invert(TRIVIAL, A)
        except linalg.SingularMatrixError:
            continue
        seen += 1
        d = len(A)
        assert linalg.mat_mul(A, inv) == linalg.identity(TRIVIAL, d)


def test_invert_singular_raises() -> None:
    with pytest.raises(linalg.SingularMatrixError):
        linalg.invert(TRIVIAL, [[Fraction(1), Fraction(2)],
                                [Fraction(2), Fraction(4)]])


def test_kernel_is_annihilated() -> None:
    rows = [[Fraction(1), Fraction(2), Fraction(3)],
            [Fraction(2), Fraction(4), Fraction(6)],
            [Fraction(0), Fraction(1), Fraction(1)]]
    ker = linalg.kernel(rows)
    assert len(ker) == 1
    for v in ker:
        assert all(x == 0 for x in linalg.mat_vec(rows, v))


def test_intersect_spans_dimension_random() -> None:
    rng = random.Random(13)
    for _ in range(60):
        d = rng.randint(2, 4)
        U = [[Fraction(rng.randint(-2, 2)) for _ in range(d)]
             for _ in range(rng.randint(1, d))]
        V = [[Fraction(rng.randint(-2, 2)) for _ in range(d)]
             for _ in range(rng.randint(1, d))]
        U = [u for u in U if any(u)]
        V = [v for v in V if any(v)]
        if not U or not V:
            continue
        got = linalg.intersect_spans(U, V)
        assert len(got) == oracles.intersection_dim(U, V)
        for w in got:
            assert linalg.in_span(U, w) and linalg.in_span(V, w)


def test_solve_from_inverse() -> None:
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    inv = linalg.invert(TRIVIAL, A)
    b = (Fraction(3), Fraction(2))
    x = linalg.solve_from_inverse(inv, b)
    assert tuple(linalg.mat_vec(A, x)) == b
