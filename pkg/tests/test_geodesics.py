"""Norm geodesics: interpolation, metric speed, convexity lemmas."""

import math
import random
from fractions import Fraction

import pytest

from geonorm.field import TRIVIAL
from geonorm.geodesics import geodesic
from geonorm.norms import (
    DiagNorm,
    NormError,
    det_norm,
    distance,
    sym_power_norm,
    volume,
)

F = Fraction
TS = (F(0), F(1, 4), F(1, 3), F(1, 2), F(3, 4), F(1))


def _std(weights):
    return DiagNorm.standard(TRIVIAL, tuple(F(w) for w in weights))


def _rand_std(rng, d):
    return _std(tuple(rng.randint(-4, 4) for _ in range(d)))


def test_constant_geodesic() -> None:
    n = _std((0, 2))
    g = geodesic(n, n)
    for t in TS:
        assert g.at(t) == n


def test_endpoints() -> None:
    n0, n1 = _std((0, 0)), _std((3, -1))
    g = geodesic(n0, n1)
    assert g.at(F(0)) == n0
    assert g.at(F(1)) == n1


def test_midpoint_same_basis() -> None:
    g = geodesic(_std((0, 0)), _std((0, 2)))
    assert tuple(sorted(g.at(F(1, 2)).weights)) == (F(0), F(1))


def test_quarter_point() -> None:
    g = geodesic(_std((0, 4)), _std((2, 0)))
    assert tuple(sorted(g.at(F(1, 4)).weights)) == (F(1, 2), F(3))


def test_cross_basis_midpoint() -> None:
    n0 = _std((0, 1))
    n1 = DiagNorm(TRIVIAL, ((F(1), F(1)), (F(1), F(0))), (F(0), F(1)))
    mid = geodesic(n0, n1).at(F(1, 2))
    assert mid.evaluate((F(1), F(0))) == F(1, 2)
    assert mid.evaluate((F(0), F(1))) == F(1, 2)


def test_t_out_of_range() -> None:
    g = geodesic(_std((0,)), _std((1,)))
    with pytest.raises(NormError):
        g.at(F(3, 2))
    with pytest.raises(NormError):
        g.at(F(-1, 4))


def test_distance_linear_in_t() -> None:
    rng = random.Random(41)
    for _ in range(30):
        d = rng.randint(1, 4)
        n0, n1 = _rand_std(rng, d), _rand_std(rng, d)
        g = geodesic(n0, n1)
        for p in (1, 2, math.inf):
            base = distance(n0, n1, p)
            for t in TS:
                for s in TS:
                    got = distance(g.at(t), g.at(s), p)
                    if p == math.inf:
                        assert got == abs(t - s) * base
                    else:
                        # distance() returns the p-th power for finite p
                        assert got == abs(t - s) ** p * base


def test_log_convexity_on_vectors() -> None:
    # on the -log scale the geodesic value at t dominates the chord
    rng = random.Random(43)
    for _ in range(30):
        d = rng.randint(2, 3)
        n0, n1 = _rand_std(rng, d), _rand_std(rng, d)
        g = geodesic(n0, n1)
        for _ in range(10):
            v = tuple(F(rng.randint(-3, 3)) for _ in range(d))
            if all(x == 0 for x in v):
                continue
            v0, v1 = n0.evaluate(v), n1.evaluate(v)
            for t in TS:
                assert g.at(t).evaluate(v) >= (1 - t) * v0 + t * v1


def test_endpoint_monotonicity() -> None:
    rng = random.Random(47)
    for _ in range(30):
        d = rng.randint(1, 3)
        w0 = tuple(rng.randint(-3, 3) for _ in range(d))
        w1 = tuple(rng.randint(-3, 3) for _ in range(d))
        # primed endpoints dominate on the -log scale: larger weights
        w0p = tuple(x + rng.randint(0, 2) for x in w0)
        w1p = tuple(x + rng.randint(0, 2) for x in w1)
        g = geodesic(_std(w0), _std(w1))
        gp = geodesic(_std(w0p), _std(w1p))
        for t in TS:
            a, b = g.at(t), gp.at(t)
            assert all(x <= y for x, y in zip(a.weights, b.weights))


def test_determinant_commutes() -> None:
    rng = random.Random(53)
    for _ in range(20):
        d = rng.randint(1, 4)
        n0, n1 = _rand_std(rng, d), _rand_std(rng, d)
        g = geodesic(n0, n1)
        gd = geodesic(det_norm(n0), det_norm(n1))
        for t in TS:
            assert det_norm(g.at(t)) == gd.at(t)


def test_relative_volume_affine() -> None:
    rng = random.Random(59)
    for _ in range(20):
        d = rng.randint(1, 3)
        g = geodesic(_rand_std(rng, d), _rand_std(rng, d))
        h = geodesic(_rand_std(rng, d), _rand_std(rng, d))
        vals = [volume(g.at(t), h.at(t)) for t in TS]
        v0, v1 = vals[0], vals[-1]
        assert vals == [(1 - t) * v0 + t * v1 for t in TS]


def test_metric_convexity_d1_and_dinf() -> None:
    rng = random.Random(61)
    for _ in range(20):
        d = rng.randint(1, 3)
        g = geodesic(_rand_std(rng, d), _rand_std(rng, d))
        h = geodesic(_rand_std(rng, d), _rand_std(rng, d))
        for p in (1, math.inf):
            end0 = distance(g.at(F(0)), h.at(F(0)), p)
            end1 = distance(g.at(F(1)), h.at(F(1)), p)
            for t in TS:
                assert distance(g.at(t), h.at(t), p) <= (1 - t) * end0 + t * end1


def test_sym_power_commutes() -> None:
    rng = random.Random(67)
    for _ in range(10):
        d = rng.randint(2, 3)
        n0, n1 = _rand_std(rng, d), _rand_std(rng, d)
        for m in (2, 3, 4):
            g = geodesic(n0, n1)
            gs = geodesic(sym_power_norm(n0, m), sym_power_norm(n1, m))
            for t in (F(0), F(1, 2), F(2, 3), F(1)):
                assert sym_power_norm(g.at(t), m) == gs.at(t)