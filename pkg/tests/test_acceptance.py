"""Acceptance gate: one test (one pass/fail line under -v) per criterion.

All four verification suites run once in a session fixture; each criterion
asserts its slice of the check rows.  Everything is exact rational
arithmetic except the convergence-rate criterion, whose 5% threshold is
still compared between exact rationals.
"""

from fractions import Fraction

import pytest

from geonorm.suites import (
    SUITE_NAMES,
    convergence_pair_p1,
    convergence_pair_p2,
    run_suite,
)
from geonorm.toric import d1_metric, energy


@pytest.fixture(scope="session")
def rows():
    by_check = {}
    for name in SUITE_NAMES:
        for row in run_suite(name, seed=0):
            by_check[row["check"]] = row
    return by_check


def _assert_pass(rows, checks, exact=True):
    missing = [c for c in checks if c not in rows]
    assert not missing, f"suite rows missing: {missing}"
    failing = [rows[c] for c in checks if rows[c]["status"] != "pass"]
    assert not failing, f"failing checks: {failing}"
    if exact:
        inexact = [c for c in checks if not rows[c]["exact"]]
        assert not inexact, f"checks not exact: {inexact}"


def test_criterion_1_norm_space_spectra_and_distances(rows) -> None:
    _assert_pass(rows, (
        "spectrum-basis-independence",
        "d1-triangle",
        "d1-join-identity",
        "volume-cocycle",
    ))


def test_criterion_2_norm_geodesics(rows) -> None:
    _assert_pass(rows, (
        "geodesic-log-convexity",
        "geodesic-endpoint-monotonicity",
        "geodesic-determinant",
        "geodesic-affine-volume",
        "geodesic-d1-convexity",
        "geodesic-dinf-convexity",
        "geodesic-sym-power",
    ))


def test_criterion_3_graded_geodesics_submultiplicative(rows) -> None:
    _assert_pass(rows, (
        "graded-geodesic-submultiplicative-P1",
        "graded-geodesic-submultiplicative-P2",
        "graded-dp-linearity",
    ))


def test_criterion_4_quantization_and_convergence(rows) -> None:
    _assert_pass(rows, (
        "fs-supnorm-roundtrip",
        "supnorm-idempotence",
        "d1-two-routes",
    ))
    _assert_pass(rows, (
        "energy-d1-convergence-P1",
        "energy-d1-convergence-P2",
    ), exact=False)
    # the late gap sits below 5% of the k = 2 gap, compared as exact rationals
    threshold = Fraction(5, 100)
    for pair, k_late in ((convergence_pair_p1(), 40),
                         (convergence_pair_p2(), 12)):
        for fn in (energy, d1_metric):
            res = fn(*pair, kmax=k_late)
            assert res.gap(k_late) <= threshold * res.gap(2)


def test_criterion_5_kiselman_minimum_principle(rows) -> None:
    _assert_pass(rows, (
        "marginal-gradient-constraint",
        "legendre-duality-roundtrip",
        "kiselman-worked-case",
    ))


def test_criterion_6_maximal_segments(rows) -> None:
    _assert_pass(rows, (
        "maximum-principle",
        "legendre-equals-quantized",
        "energy-affine",
        "d1-geodesicity-per-level",
        "degree-one-stabilization",
    ))


def test_criterion_7_planted_negative_controls(rows) -> None:
    _assert_pass(rows, (
        "planted-submultiplicative-violation",
        "planted-non-psh-segment",
    ))
