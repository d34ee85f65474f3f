"""Section rings of (P^n, O(m)), graded norms, submultiplicativity, statistics."""

import random
from fractions import Fraction
from math import comb, inf

import pytest

import oracles
from geonorm.field import TRIVIAL
from geonorm.graded import (
    GradedError,
    GradedNorm,
    SectionRing,
    asymptotic_stats,
    check_submultiplicative,
    generate_degree_one,
    graded_geodesic,
    lattice_points,
    serialize_counterexample,
)
from geonorm.norms import DiagNorm

F = Fraction


def test_lattice_points_counts() -> None:
    for n in (1, 2, 3):
        for d in (0, 1, 2, 3):
            assert len(lattice_points(n, d)) == comb(d + n, n)
    assert list(lattice_points(1, 2)) == [(0,), (1,), (2,)]
    assert (1, 1) in lattice_points(2, 2)


def test_section_ring_h0() -> None:
    r12 = SectionRing(1, 2)
    assert [r12.h0(k) for k in (1, 2, 3)] == [3, 5, 7]
    r21 = SectionRing(2, 1)
    assert [r21.h0(k) for k in (1, 2, 3)] == [3, 6, 10]
    assert len(r21.basis(2)) == 6


def test_generate_trivial_stays_trivial() -> None:
    ring = SectionRing(1, 2)
    gn = generate_degree_one(ring, {a: F(0) for a in ring.basis(1)}, 5)
    for k in (1, 3, 5):
        assert all(w == 0 for w in gn.degree_weights(k).values())


def test_generate_affine_weights() -> None:
    ring = SectionRing(1, 1)
    gn = generate_degree_one(ring, {(0,): F(0), (1,): F(1)}, 6)
    for k in (1, 2, 4, 6):
        assert gn.degree_weights(k) == {(j,): F(j) for j in range(k + 1)}


def test_generate_concentrated_weight() -> None:
    # the doubled middle point beats the sum of the endpoints
    ring = SectionRing(1, 2)
    gn = generate_degree_one(ring, {(0,): F(0), (1,): F(5), (2,): F(0)}, 4)
    assert gn.weight(2, (2,)) == 10
    assert gn.weight(2, (1,)) == 5
    assert gn.weight(4, (4,)) == 20


def test_generate_matches_bruteforce_oracle() -> None:
    rng = random.Random(101)
    for ring in (SectionRing(1, 1), SectionRing(1, 2), SectionRing(2, 1)):
        for _ in range(8):
            table = {a: F(rng.randint(-4, 4)) for a in ring.basis(1)}
            gn = generate_degree_one(ring, table, 3)
            for k in (2, 3):
                for a in ring.basis(k):
                    expected = oracles.max_decomposition_weight(table, a, k)
                    assert gn.weight(k, a) == expected


def test_generated_norms_are_submultiplicative() -> None:
    rng = random.Random(103)
    ring = SectionRing(1, 2)
    for _ in range(5):
        table = {a: F(rng.randint(-3, 3)) for a in ring.basis(1)}
        gn = generate_degree_one(ring, table, 8)
        assert check_submultiplicative(gn) is None


def test_planted_violation_found_in_lex_order() -> None:
    ring = SectionRing(1, 1)
    gn = GradedNorm(ring, [
        {(0,): F(0), (1,): F(0)},
        {(0,): F(-1), (1,): F(0), (2,): F(0)},
    ])
    violation = check_submultiplicative(gn)
    assert violation == (1, 1, (0,), (0,))
    assert serialize_counterexample(violation) == {
        "k": 1, "l": 1, "a": [0], "b": [0]
    }


def test_graded_geodesic_endpoints_and_midpoint() -> None:
    ring = SectionRing(1, 1)
    gn0 = generate_degree_one(ring, {(0,): F(0), (1,): F(0)}, 4)
    gn1 = generate_degree_one(ring, {(0,): F(0), (1,): F(2)}, 4)
    assert graded_geodesic(gn0, gn1, 0) == gn0
    assert graded_geodesic(gn0, gn1, 1) == gn1
    # degree-3 weights of gn1 are (0,2,4,6); halving them interpolates
    assert gn1.degree_weights(3) == {(j,): F(2 * j) for j in range(4)}
    mid = graded_geodesic(gn0, gn1, F(1, 2))
    assert mid.degree_weights(3) == {(j,): F(j) for j in range(4)}


def test_graded_geodesic_preserves_submultiplicativity() -> None:
    rng = random.Random(107)
    for ring, K in ((SectionRing(1, 2), 8), (SectionRing(2, 1), 5)):
        for _ in range(4):
            t0 = {a: F(rng.randint(-3, 3)) for a in ring.basis(1)}
            t1 = {a: F(rng.randint(-3, 3)) for a in ring.basis(1)}
            gn0 = generate_degree_one(ring, t0, K)
            gn1 = generate_degree_one(ring, t1, K)
            for t in (F(1, 4), F(1, 3), F(1, 2), F(2, 3)):
                assert check_submultiplicative(graded_geodesic(gn0, gn1, t)) is None


def test_asymptotic_stats_zero_pair() -> None:
    ring = SectionRing(1, 1)
    gn = generate_degree_one(ring, {(0,): F(0), (1,): F(1)}, 5)
    values, limit = asymptotic_stats(gn, gn, 1, oracle_limit=F(0))
    assert [v for _, v in values] == [F(0)] * 5
    assert limit == 0


def test_asymptotic_stats_linear_pair() -> None:
    ring = SectionRing(1, 1)
    gn0 = generate_degree_one(ring, {(0,): F(0), (1,): F(0)}, 6)
    gn1 = generate_degree_one(ring, {(0,): F(0), (1,): F(2)}, 6)
    values, _ = asymptotic_stats(gn0, gn1, 1)
    assert [v for _, v in values] == [F(1)] * 6
    sup_values, _ = asymptotic_stats(gn0, gn1, inf)
    assert [v for _, v in sup_values] == [F(2)] * 6
    # second moment of the rescaled spectrum: 4(2k+1)/(6k) -> integral 4/3
    sq_values, _ = asymptotic_stats(gn0, gn1, 2)
    assert [v for _, v in sq_values[:3]] == [F(2), F(5, 3), F(14, 9)]
    assert sq_values[-1][1] - F(4, 3) < F(1, 8)


def test_asymptotic_stats_rejects_bad_p() -> None:
    ring = SectionRing(1, 1)
    gn = generate_degree_one(ring, {(0,): F(0), (1,): F(1)}, 3)
    with pytest.raises(GradedError):
        asymptotic_stats(gn, gn, F(3, 2))


def test_norm_at_is_monomial_diagonal() -> None:
    ring = SectionRing(1, 2)
    gn = generate_degree_one(ring, {(0,): F(0), (1,): F(5), (2,): F(0)}, 3)
    n2 = gn.norm_at(2)
    assert isinstance(n2, DiagNorm)
    assert n2.field is TRIVIAL
    assert n2.is_standard_basis()
    assert set(n2.weights) == {F(0), F(5), F(10)}


def test_degree_one_norm_input_equivalent_to_table() -> None:
    ring = SectionRing(1, 2)
    table = {(0,): F(0), (1,): F(5), (2,): F(0)}
    via_norm = generate_degree_one(
        ring, DiagNorm.standard(TRIVIAL, (F(0), F(5), F(0))), 3)
    via_table = generate_degree_one(ring, table, 3)
    assert via_norm == via_table


def test_graded_json_round_trip() -> None:
    ring = SectionRing(1, 2)
    gn = generate_degree_one(ring, {(0,): F(0), (1,): F(5, 2), (2,): F(-1)}, 3)
    again = GradedNorm.from_json(gn.to_json())
    assert again == gn


def test_weight_cover_errors() -> None:
    ring = SectionRing(1, 2)
    with pytest.raises(GradedError):
        generate_degree_one(ring, {(0,): F(0), (1,): F(1)}, 3)
    with pytest.raises(GradedError):
        generate_degree_one(ring, {a: F(0) for a in ring.basis(1)}, 0)