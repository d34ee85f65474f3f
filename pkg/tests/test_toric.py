"""Toric psh metrics on (P^n, O(m)): FS/sup-norm operators, energy, d1."""

import random
from fractions import Fraction

import pytest

import oracles
from geonorm.plconvex import MaxAffine
from geonorm.suites import convergence_pair_p1, convergence_pair_p2
from geonorm.toric import (
    ConvergenceResult,
    ToricError,
    ToricMetric,
    compare_metrics,
    d1_metric,
    d_infinity_limit,
    energy,
    energy_limit,
    envelope_P,
    fs_from_norm,
    moment_volume,
    reference,
    section_ring,
    sup_graded,
    supnorm,
)
from geonorm.graded import check_submultiplicative

F = Fraction


def _ma(*pieces):
    n = len(pieces[0][0])
    return MaxAffine(n, [(tuple(F(x) for x in g), F(c)) for g, c in pieces])


def _fs_p1(weights, m=1, k=1):
    ring = section_ring(1, m)
    basis = ring.basis(k)
    return fs_from_norm(ring, k, dict(zip(basis, map(F, weights))))


# -- FS metrics ------------------------------------------------------------------


def test_fs_reference() -> None:
    phi = _fs_p1((0, 0))
    assert phi.potential == _ma(((0,), 0), ((1,), 0))
    assert phi == reference(1, 1)
    assert phi.provenance == "fs(1)"


def test_fs_shifted_weight() -> None:
    assert _fs_p1((0, -2)).potential == _ma(((0,), 0), ((1,), -2))


def test_fs_three_weights() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    assert phi.potential == _ma(((0,), 0), ((1,), 5), ((2,), 0))


def test_fs_level_divides_weights() -> None:
    phi = _fs_p1((0, 0, -2), m=1, k=2)
    assert phi.potential == _ma(((0,), 0), ((F(1, 2),), 0), ((1,), -1))


def test_fs_missing_monomial_rejected() -> None:
    ring = section_ring(1, 2)
    with pytest.raises(ToricError):
        fs_from_norm(ring, 1, {(0,): F(0), (2,): F(0)})


def test_gradient_constraint_enforced() -> None:
    with pytest.raises(ToricError):
        ToricMetric(1, 1, _ma(((2,), 0), ((0,), 0)))
    with pytest.raises(ToricError):
        ToricMetric(2, 1, _ma(((1, 1), 0), ((0, 0), 0), ((1, 0), 1)))


def test_full_support_detection() -> None:
    assert reference(2, 1).has_full_support()
    lopsided = ToricMetric(1, 1, _ma(((0,), 0), ((F(1, 2),), 0)))
    assert not lopsided.has_full_support()
    with pytest.raises(ToricError):
        supnorm(1, lopsided)


# -- sup-norm operator --------------------------------------------------------------


def test_supnorm_reference() -> None:
    assert supnorm(1, reference(1, 1)).weights == (F(0), F(0))


def test_supnorm_closes_concave_gap() -> None:
    phi = _fs_p1((0, -5, 0), m=2)
    assert supnorm(1, phi).weights == (F(0), F(0), F(0))


def test_supnorm_fixes_concave_weights() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    assert supnorm(1, phi).weights == (F(0), F(5), F(0))


def test_supnorm_matches_concave_closure_oracle() -> None:
    rng = random.Random(109)
    for n, m in ((1, 1), (1, 2), (2, 1)):
        ring = section_ring(n, m)
        basis1 = ring.basis(1)
        for _ in range(6):
            table = {a: F(rng.randint(-4, 4)) for a in basis1}
            phi = fs_from_norm(ring, 1, table)
            pts = [(tuple(map(F, a)), w) for a, w in table.items()]
            for k in (1, 2, 3):
                weights = supnorm(k, phi).weights
                for a, w in zip(ring.basis(k), weights):
                    y = tuple(F(x, k) for x in a)
                    assert w == k * oracles.concave_value(pts, y)


def test_supnorm_roundtrip_inequality_and_closure() -> None:
    rng = random.Random(113)
    seen_closed, seen_open = 0, 0
    for _ in range(40):
        ring = section_ring(1, 2)
        table = {a: F(rng.randint(-4, 4)) for a in ring.basis(1)}
        phi = fs_from_norm(ring, 1, table)
        back = fs_from_norm(ring, 1, supnorm(1, phi))
        rel = compare_metrics(back, phi).relation
        assert rel in ("le", "eq")
        pts = [(tuple(map(F, a)), w) for a, w in table.items()]
        closed = all(
            w == oracles.concave_value(pts, tuple(map(F, a)))
            for a, w in table.items()
        )
        beta = dict(zip(ring.basis(1), supnorm(1, phi).weights))
        if closed:
            seen_closed += 1
            assert beta == table
        else:
            seen_open += 1
            assert beta != table
        # metric-level equality holds either way
        assert back == phi
    assert seen_closed and seen_open


def test_supnorm_idempotent() -> None:
    rng = random.Random(127)
    for _ in range(10):
        ring = section_ring(2, 1)
        table = {a: F(rng.randint(-3, 3)) for a in ring.basis(1)}
        phi = fs_from_norm(ring, 1, table)
        for k in (1, 2):
            n1 = supnorm(k, phi)
            n2 = supnorm(k, fs_from_norm(ring, k, n1))
            assert n1 == n2


def test_sup_graded_is_submultiplicative() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    gn = sup_graded(phi, 6)
    assert check_submultiplicative(gn) is None
    assert gn.norm_at(2) == supnorm(2, phi)


# -- rooftop envelope ---------------------------------------------------------------


def test_envelope_same_metric() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    assert envelope_P(phi, phi) == phi


def test_envelope_comparable_pair() -> None:
    low = _fs_p1((0, -2))
    env = envelope_P(reference(1, 1), low)
    assert env == low
    assert env.provenance == "envelope"


def test_envelope_rooftop_truncates_both() -> None:
    phi0 = _fs_p1((0, -2)).shifted(1)           # max(1, v-1)
    phi1 = reference(1, 1)
    env = envelope_P(phi0, phi1)
    assert env.potential == _ma(((0,), 0), ((F(1, 2),), 0), ((1,), -1))
    for phi in (phi0, phi1):
        assert compare_metrics(env, phi).relation in ("le", "eq")


# -- energy ----------------------------------------------------------------------------


def test_moment_volume() -> None:
    assert moment_volume(1, 1) == 1
    assert moment_volume(1, 2) == 2
    assert moment_volume(2, 1) == F(1, 2)
    assert moment_volume(2, 3) == F(9, 2)


def test_energy_zero_on_diagonal() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    res = energy(phi, phi, kmax=4)
    assert res.limit == 0
    assert all(v == 0 for _, v in res.per_k)


def test_energy_comparable_pair() -> None:
    low = _fs_p1((0, -2))
    res = energy(low, reference(1, 1), kmax=6)
    assert res.limit == -1
    assert all(v == -1 for _, v in res.per_k)
    assert energy(reference(1, 1), low, kmax=2).limit == 1


def test_energy_sign_convention() -> None:
    # phi0 <= phi1 forces E(phi0, phi1) <= 0, and raising phi0 raises E
    low = _fs_p1((0, -2))
    ref = reference(1, 1)
    assert compare_metrics(low, ref).relation == "le"
    assert energy_limit(low, ref) < 0
    assert energy_limit(low.shifted(F(1, 2)), ref) > energy_limit(low, ref)


def test_energy_cocycle_at_limit() -> None:
    rng = random.Random(131)
    ring = section_ring(1, 2)
    metrics = []
    for _ in range(3):
        table = {a: F(rng.randint(-3, 3)) for a in ring.basis(1)}
        metrics.append(fs_from_norm(ring, 1, table))
    a, b, c = metrics
    assert energy_limit(a, b) + energy_limit(b, c) == energy_limit(a, c)


# -- d1 ---------------------------------------------------------------------------------


def test_d1_zero_iff_equal() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    assert d1_metric(phi, phi, kmax=3).limit == 0
    other = _fs_p1((0, 4, 0), m=2)
    assert d1_metric(phi, other, kmax=3).limit > 0


def test_d1_comparable_pair() -> None:
    res = d1_metric(_fs_p1((0, -2)), reference(1, 1), kmax=6)
    assert res.limit == 1
    assert all(v == 1 for _, v in res.per_k)


def test_d1_rooftop_pair() -> None:
    # two-route value through P = max(0, v/2, v-1): each energy term is 1/4
    phi0 = _fs_p1((0, -2)).shifted(1)
    phi1 = reference(1, 1)
    env = envelope_P(phi0, phi1)
    assert energy_limit(phi0, env) == F(1, 4)
    assert energy_limit(phi1, env) == F(1, 4)
    assert d1_metric(phi0, phi1, kmax=4).limit == F(1, 2)


def test_d1_triangle_inequality_at_limit() -> None:
    rng = random.Random(137)
    ring = section_ring(1, 1)
    for _ in range(15):
        ms = [fs_from_norm(ring, 1, {a: F(rng.randint(-3, 3))
                                     for a in ring.basis(1)})
              for _ in range(3)]
        ab = d1_metric(ms[0], ms[1], kmax=1).limit
        bc = d1_metric(ms[1], ms[2], kmax=1).limit
        ac = d1_metric(ms[0], ms[2], kmax=1).limit
        assert ac <= ab + bc


def test_d_infinity_limit() -> None:
    low = _fs_p1((0, -2))
    assert d_infinity_limit(low, reference(1, 1)) == 2
    assert d_infinity_limit(low, low) == 0


# -- convergence bookkeeping ----------------------------------------------------------


def test_convergence_rows_contract() -> None:
    res = energy(_fs_p1((0, -2)), reference(1, 1), kmax=3)
    rows = res.rows()
    assert [r["k"] for r in rows] == [1, 2, 3]
    for r in rows:
        assert set(r) == {"k", "exact_value", "decimal_value", "oracle_limit"}
        assert r["exact_value"] == "-1"
        assert r["decimal_value"] == "-1"
        assert r["oracle_limit"] == "-1"
    assert res.gap(2) == 0
    with pytest.raises(KeyError):
        res.gap(7)


def test_decimal_rendering() -> None:
    res = ConvergenceResult(((1, F(1, 3)),), F(0))
    assert res.rows()[0]["decimal_value"] == "0.333333333333"


def test_frozen_convergence_instance_p1() -> None:
    phi0, phi1 = convergence_pair_p1()
    e = energy(phi0, phi1, kmax=4)
    assert e.limit == 1
    assert e.gap(2) == F(1, 4)
    d = d1_metric(phi0, phi1, kmax=4)
    assert d.limit == 1
    assert d.gap(2) == F(1, 4)


def test_frozen_convergence_instance_p2() -> None:
    phi0, phi1 = convergence_pair_p2()
    e = energy(phi0, phi1, kmax=2)
    assert e.limit == F(1, 4)
    assert e.gap(2) == F(1, 24)


# -- serialization -----------------------------------------------------------------------


def test_metric_json_round_trip() -> None:
    phi = _fs_p1((0, 5, 0), m=2)
    again = ToricMetric.from_json(phi.to_json())
    assert again == phi
    assert again.provenance == phi.provenance


def test_mismatched_bundles_rejected() -> None:
    with pytest.raises(ToricError):
        energy(reference(1, 1), reference(1, 2))
    with pytest.raises(ToricError):
        compare_metrics(reference(1, 1), reference(2, 1))
