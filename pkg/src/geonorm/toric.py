"""Continuous psh toric metrics on O(m) over P^n, in skeleton coordinates.

A metric is a convex PL potential u(v) with gradients in the dilated
simplex m*Delta_n.  A monomial-diagonal degree-k norm with weights beta_a
corresponds to u(v) = k^-1 max_a(<a, v> + beta_a); conversely the degree-k
sup-norm of a metric reads the concave conjugate profile q = -u* at the
lattice points: beta_a = k*q(a/k).  Monge-Ampere energy and the d1 distance
are computed both per degree (exact norm sums) and in the limit (exact
integrals of conjugate profiles over m*Delta).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from .field import TRIVIAL, format_fraction
from .graded import GradedNorm, SectionRing
from .norms import DiagNorm
from .plconvex import (
    Comparison,
    ConcaveProfile,
    MaxAffine,
    compare,
    conjugate,
    envelope_constrained,
    integrate_abs_difference,
    integrate_difference,
    max_abs_difference,
    moment_simplex,
    prune,
)


class ToricError(ValueError):
    pass


_rings: dict = {}


def section_ring(n: int, m: int) -> SectionRing:
    if (n, m) not in _rings:
        _rings[(n, m)] = SectionRing(n, m)
    return _rings[(n, m)]


@dataclass(frozen=True)
class ToricMetric:
    n: int
    m: int
    potential: MaxAffine
    provenance: str = "fs(1)"

    def __post_init__(self):
        if self.potential.n != self.n:
            raise ToricError("potential dimension does not match n")
        m = Fraction(self.m)
        for g, _ in self.potential.pieces:
            if any(x < 0 for x in g) or sum(g) > m:
                raise ToricError(
                    f"piece gradient {g} falls outside {self.m}*Delta")

    def has_full_support(self) -> bool:
        """Gradient hull contains every vertex of m*Delta.

        Since all gradients lie inside the simplex, a simplex vertex lies in
        their hull iff it is itself a gradient.
        """
        grads = set(self.potential.gradients())
        zero = tuple(Fraction(0) for _ in range(self.n))
        if zero not in grads:
            return False
        m = Fraction(self.m)
        for i in range(self.n):
            e = tuple(m if j == i else Fraction(0) for j in range(self.n))
            if e not in grads:
                return False
        return True

    def profile(self) -> ConcaveProfile:
        """Concave conjugate q = -u* on the gradient hull."""
        return conjugate(self.potential)

    def shifted(self, c) -> "ToricMetric":
        return ToricMetric(self.n, self.m, self.potential.shifted(c),
                           self.provenance)

    def __eq__(self, other):
        if not isinstance(other, ToricMetric):
            return NotImplemented
        if (self.n, self.m) != (other.n, other.m):
            return False
        return compare(self.potential, other.potential).relation == "eq"

    __hash__ = None

    def to_json(self):
        return {"n": self.n, "m": self.m,
                "potential": self.potential.to_json(),
                "provenance": self.provenance}

    @classmethod
    def from_json(cls, obj) -> "ToricMetric":
        return cls(obj["n"], obj["m"], MaxAffine.from_json(obj["potential"]),
                   obj.get("provenance", "fs(1)"))


def compare_metrics(phi0: ToricMetric, phi1: ToricMetric) -> Comparison:
    if (phi0.n, phi0.m) != (phi1.n, phi1.m):
        raise ToricError("metrics live on different line bundles")
    return compare(phi0.potential, phi1.potential)


def fs_from_norm(ring: SectionRing, k: int, source) -> ToricMetric:
    """Level-k Fubini-Study metric of a monomial-diagonal norm.

    Weights may be a DiagNorm in the degree-k monomial basis or a mapping
    from lattice points; all h0(k) monomials must be present.
    """
    basis = ring.basis(k)
    if isinstance(source, DiagNorm):
        if source.dim != len(basis) or not source.is_standard_basis():
            raise ToricError(
                f"norm must be monomial-diagonal of dimension {len(basis)}")
        table = dict(zip(basis, source.weights))
    else:
        table = {tuple(a): Fraction(w) for a, w in dict(source).items()}
        if set(table) != set(basis):
            raise ToricError("weights must cover the degree-k basis exactly")
    pieces = [
        (tuple(Fraction(x, k) for x in a), Fraction(table[a], 1) / k)
        for a in basis
    ]
    return ToricMetric(ring.n, ring.m, MaxAffine(ring.n, pieces), f"fs({k})")


def reference(n: int, m: int) -> ToricMetric:
    """The trivial-weight FS metric: u = max over lattice points of <a, v>."""
    ring = section_ring(n, m)
    return fs_from_norm(ring, 1, {a: 0 for a in ring.basis(1)})


def supnorm(k: int, phi: ToricMetric) -> DiagNorm:
    """Degree-k sup-norm of a metric: weights k*q(a/k) on the lattice.

    The conjugate scales as (k u)*(a) = k u*(a/k), so one profile of the
    defining potential serves every degree.
    """
    if not phi.has_full_support():
        raise ToricError(
            "metric potential must carry the full moment simplex "
            "(every vertex of m*Delta among its gradients)")
    ring = section_ring(phi.n, phi.m)
    q = phi.profile()
    weights = tuple(
        k * q.value(tuple(Fraction(x, k) for x in a))
        for a in ring.basis(k)
    )
    return DiagNorm.standard(TRIVIAL, weights)


def sup_graded(phi: ToricMetric, kmax: int) -> GradedNorm:
    """The graded norm k -> supnorm(k, phi), degrees 1..kmax."""
    ring = section_ring(phi.n, phi.m)
    tables = []
    for k in range(1, kmax + 1):
        norm = supnorm(k, phi)
        tables.append(dict(zip(ring.basis(k), norm.weights)))
    return GradedNorm(ring, tables)


def envelope_P(phi0: ToricMetric, phi1: ToricMetric) -> ToricMetric:
    """Rooftop envelope: the largest psh metric below both inputs."""
    if (phi0.n, phi0.m) != (phi1.n, phi1.m):
        raise ToricError("metrics live on different line bundles")
    pot = envelope_constrained(
        [phi0.potential, phi1.potential],
        moment_simplex(phi0.n, phi0.m),
    )
    return ToricMetric(phi0.n, phi0.m, prune(pot), "envelope")


def moment_volume(n: int, m: int) -> Fraction:
    return Fraction(m ** n, factorial(n))


@dataclass(frozen=True)
class ConvergenceResult:
    """Per-degree exact values plus the exact integral limit."""

    per_k: tuple          # ((k, Fraction), ...)
    limit: Fraction

    def gap(self, k: int) -> Fraction:
        for kk, v in self.per_k:
            if kk == k:
                return abs(v - self.limit)
        raise KeyError(k)

    def rows(self):
        """CSV-ready rows: k, exact value, decimal rendering, limit."""
        out = []
        for k, v in self.per_k:
            out.append({
                "k": k,
                "exact_value": format_fraction(v),
                "decimal_value": f"{float(v):.12g}",
                "oracle_limit": format_fraction(self.limit),
            })
        return out


def _require_pair(phi0, phi1):
    if (phi0.n, phi0.m) != (phi1.n, phi1.m):
        raise ToricError("metrics live on different line bundles")
    for phi in (phi0, phi1):
        if not phi.has_full_support():
            raise ToricError(
                "energy and d1 need potentials carrying the full moment "
                "simplex")


def energy(phi0: ToricMetric, phi1: ToricMetric, kmax: int = 8) -> ConvergenceResult:
    """Monge-Ampere energy: per-k relative volumes and the integral limit.

    Per degree: (k h0(k))^-1 sum_a (beta0_a - beta1_a) over sup-norm
    weights.  Limit: vol(m Delta)^-1 * integral of (q0 - q1).  Increasing
    in the first argument; antisymmetric; <= 0 when phi0 <= phi1.
    """
    _require_pair(phi0, phi1)
    ring = section_ring(phi0.n, phi0.m)
    per_k = []
    for k in range(1, kmax + 1):
        b0 = supnorm(k, phi0).weights
        b1 = supnorm(k, phi1).weights
        total = sum(x - y for x, y in zip(b0, b1))
        per_k.append((k, Fraction(total, k * ring.h0(k))))
    lim = integrate_difference(phi0.profile(), phi1.profile()) \
        / moment_volume(phi0.n, phi0.m)
    return ConvergenceResult(tuple(per_k), lim)


def energy_limit(phi0: ToricMetric, phi1: ToricMetric) -> Fraction:
    _require_pair(phi0, phi1)
    return integrate_difference(phi0.profile(), phi1.profile()) \
        / moment_volume(phi0.n, phi0.m)


def d1_metric(phi0: ToricMetric, phi1: ToricMetric, kmax: int = 8) -> ConvergenceResult:
    """d1 distance: per-k normalized norm distances and the integral limit.

    The limit is computed two ways and asserted equal: directly as
    vol^-1 * integral |q0 - q1|, and as E(phi0, P) + E(phi1, P) through the
    rooftop envelope P = P(phi0, phi1).
    """
    _require_pair(phi0, phi1)
    ring = section_ring(phi0.n, phi0.m)
    per_k = []
    for k in range(1, kmax + 1):
        b0 = supnorm(k, phi0).weights
        b1 = supnorm(k, phi1).weights
        total = sum(abs(x - y) for x, y in zip(b0, b1))
        per_k.append((k, Fraction(total, k * ring.h0(k))))
    direct = integrate_abs_difference(phi0.profile(), phi1.profile()) \
        / moment_volume(phi0.n, phi0.m)
    roof = envelope_P(phi0, phi1)
    via_envelope = energy_limit(phi0, roof) + energy_limit(phi1, roof)
    if direct != via_envelope:
        raise ToricError(
            f"d1 routes disagree: integral {direct} vs envelope "
            f"{via_envelope}")
    return ConvergenceResult(tuple(per_k), direct)


def d_infinity_limit(phi0: ToricMetric, phi1: ToricMetric) -> Fraction:
    """sup |q0 - q1| over the moment simplex (the d_infinity limit)."""
    _require_pair(phi0, phi1)
    return max_abs_difference(phi0.profile(), phi1.profile())
