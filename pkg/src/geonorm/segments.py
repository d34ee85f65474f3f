"""Segments of toric metrics: Fubini-Study, quantized, maximal, Legendre.

A level-k FS segment interpolates monomial weights linearly in t; its joint
potential is convex in (t, v), which is the psh condition in this arena.
The quantized segment at level k pushes the norm geodesic of the two
degree-k sup-norms back through FS_k; the maximal segment is the pointwise
max over a divisibility chain of levels; the Legendre segment realizes the
same object through rooftop envelopes P(phi0, phi1 - tau), with the sup
over tau reduced to an exact finite critical set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geodesics import geodesic
from .graded import SectionRing
from .norms import distance
from .plconvex import MaxAffine, marginal_min, overlay_vertices, prune
from .toric import (
    ToricError,
    ToricMetric,
    compare_metrics,
    energy_limit,
    envelope_P,
    fs_from_norm,
    reference,
    section_ring,
    supnorm,
)


@dataclass(frozen=True)
class FSSegment:
    """Level-k segment with linearly interpolating monomial weights."""

    ring: SectionRing
    k: int
    weights0: tuple   # aligned with ring.basis(k)
    weights1: tuple

    @classmethod
    def build(cls, ring: SectionRing, k: int, w0, w1) -> "FSSegment":
        basis = ring.basis(k)

        def align(w):
            if isinstance(w, dict):
                table = {tuple(a): Fraction(x) for a, x in w.items()}
                if set(table) != set(basis):
                    raise ToricError(
                        "segment weights must cover the degree-k basis")
                return tuple(table[a] for a in basis)
            w = tuple(Fraction(x) for x in w)
            if len(w) != len(basis):
                raise ToricError(
                    f"expected {len(basis)} weights, got {len(w)}")
            return w

        return cls(ring, k, align(w0), align(w1))

    def eval(self, t) -> ToricMetric:
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ToricError(f"segment time {t} outside [0, 1]")
        basis = self.ring.basis(self.k)
        table = {
            a: (1 - t) * w0 + t * w1
            for a, w0, w1 in zip(basis, self.weights0, self.weights1)
        }
        return fs_from_norm(self.ring, self.k, table)

    @property
    def start(self) -> ToricMetric:
        return self.eval(0)

    @property
    def end(self) -> ToricMetric:
        return self.eval(1)

    def joint_potential(self) -> MaxAffine:
        """The segment as one convex PL function of (t, v)."""
        k = self.k
        basis = self.ring.basis(k)
        pieces = []
        for a, w0, w1 in zip(basis, self.weights0, self.weights1):
            grad = (Fraction(w1 - w0, k),) + tuple(
                Fraction(x, k) for x in a)
            pieces.append((grad, Fraction(w0, k)))
        return MaxAffine(1 + self.ring.n, pieces)

    def to_json(self):
        return {
            "ring": {"n": self.ring.n, "m": self.ring.m},
            "k": self.k,
            "weights0": [str(w) for w in self.weights0],
            "weights1": [str(w) for w in self.weights1],
        }

    @classmethod
    def from_json(cls, obj) -> "FSSegment":
        ring = section_ring(obj["ring"]["n"], obj["ring"]["m"])
        w0 = [Fraction(x) for x in obj["weights0"]]
        w1 = [Fraction(x) for x in obj["weights1"]]
        return cls.build(ring, obj["k"], w0, w1)


def fs_segment(ring: SectionRing, k: int, w0, w1) -> FSSegment:
    return FSSegment.build(ring, k, w0, w1)


def quantized_level(phi0: ToricMetric, phi1: ToricMetric, k: int) -> FSSegment:
    """The level-k FS segment induced by the sup-norm geodesic."""
    ring = section_ring(phi0.n, phi0.m)
    geo = geodesic(supnorm(k, phi0), supnorm(k, phi1))
    return FSSegment(ring, k, geo.weights0, geo.weights1)


def quantized_segment(phi0: ToricMetric, phi1: ToricMetric, k: int, t) -> ToricMetric:
    return quantized_level(phi0, phi1, k).eval(t)


def quantization_levels(kmax: int):
    """The divisibility chain 1, 2, 4, ... capped at kmax."""
    levels = []
    k = 1
    while k <= kmax:
        levels.append(k)
        k *= 2
    return tuple(levels)


def maximal_segment(phi0: ToricMetric, phi1: ToricMetric, t, kmax: int = 8) -> ToricMetric:
    """Pointwise max of quantized segments along the level chain."""
    if kmax < 1:
        raise ToricError("kmax must be at least 1")
    pots = [
        quantized_segment(phi0, phi1, k, t).potential
        for k in quantization_levels(kmax)
    ]
    pot = prune(pots[0].max_with(*pots[1:]))
    return ToricMetric(phi0.n, phi0.m, pot, "limit")


def tau_critical_set(phi0: ToricMetric, phi1: ToricMetric):
    """Shift values where the rooftop P(phi0, phi1 - tau) changes shape.

    The inner sup over tau of t*tau + min(q0, q1 - tau) at a point y is
    attained at tau = q1(y) - q0(y); over the whole simplex the relevant
    values are those at the vertices of the profile overlay.
    """
    q0 = phi0.profile()
    q1 = phi1.profile()
    taus = {q1.value(y) - q0.value(y) for y in overlay_vertices(q0, q1)}
    return tuple(sorted(taus))


def legendre_segment(phi0: ToricMetric, phi1: ToricMetric, t) -> ToricMetric:
    """sup over tau of (P(phi0, phi1 - tau) + t*tau), exactly.

    The resulting conjugate profile is (1-t) q0 + t q1, so the segment is
    d1-geodesic and has affine energy by construction.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ToricError(f"segment time {t} outside [0, 1]")
    _ = compare_metrics(phi0, phi1)  # dimension/bundle guard
    pots = []
    for tau in tau_critical_set(phi0, phi1):
        roof = envelope_P(phi0, phi1.shifted(-tau))
        pots.append(roof.potential.shifted(t * tau))
    pot = prune(pots[0].max_with(*pots[1:]))
    return ToricMetric(phi0.n, phi0.m, pot, "limit")


def kiselman_dual(seg: FSSegment, tau) -> ToricMetric:
    """inf over t of (phi_t - t*tau): epigraph projection of the segment.

    The minimum principle says the result is again psh; here that means
    the marginal's gradients land in m*Delta, which the ToricMetric
    constructor checks exactly.
    """
    pot = marginal_min(seg.joint_potential(), tau)
    return ToricMetric(seg.ring.n, seg.ring.m, pot, "envelope")


def duality_tau_set(seg: FSSegment):
    """t-slopes of the joint potential: where the Legendre sup is attained."""
    k = seg.k
    taus = {Fraction(w1 - w0, k)
            for w0, w1 in zip(seg.weights0, seg.weights1)}
    return tuple(sorted(taus))


def segment_from_dual(seg: FSSegment, t) -> ToricMetric:
    """Legendre recovery: sup over tau of (kiselman_dual + t*tau)."""
    t = Fraction(t)
    pots = [
        kiselman_dual(seg, tau).potential.shifted(t * tau)
        for tau in duality_tau_set(seg)
    ]
    pot = prune(pots[0].max_with(*pots[1:]))
    return ToricMetric(seg.ring.n, seg.ring.m, pot, "limit")


def diagnostics(phi0: ToricMetric, phi1: ToricMetric, kmax: int = 8,
                ts=(0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)):
    """Exact checks behind the maximal-segment theorems, as a report dict.

    Covers per-level d1 geodesicity of the sup-norm geodesics, affineness
    of the energy along the Legendre segment (against the reference
    metric, via the integral oracle), and endpoint recovery gaps of the
    quantized maximal segment.
    """
    ts = tuple(Fraction(t) for t in ts)
    ref = reference(phi0.n, phi0.m)
    levels = quantization_levels(kmax)
    report = {"levels": list(levels), "ts": [str(t) for t in ts]}

    per_level = []
    for k in levels:
        seg = quantized_level(phi0, phi1, k)
        d_ends = distance(supnorm(k, phi0), supnorm(k, phi1), 1)
        ok = True
        for i, s in enumerate(ts):
            for tprime in ts[i + 1:]:
                ws = [(1 - s) * a + s * b
                      for a, b in zip(seg.weights0, seg.weights1)]
                wt = [(1 - tprime) * a + tprime * b
                      for a, b in zip(seg.weights0, seg.weights1)]
                d_st = Fraction(sum(abs(x - y) for x, y in zip(ws, wt)),
                                len(ws))
                if d_st != (tprime - s) * d_ends:
                    ok = False
        per_level.append({"k": k, "d1_endpoints": str(d_ends),
                          "geodesic_exact": ok})
    report["d1_geodesic_per_level"] = per_level

    e0 = energy_limit(legendre_segment(phi0, phi1, 0), ref)
    e1 = energy_limit(legendre_segment(phi0, phi1, 1), ref)
    energies = []
    affine_ok = True
    for t in ts:
        et = energy_limit(legendre_segment(phi0, phi1, t), ref)
        resid = et - ((1 - t) * e0 + t * e1)
        if resid != 0:
            affine_ok = False
        energies.append({"t": str(t), "energy": str(et),
                         "residual": str(resid)})
    report["energy_along_segment"] = energies
    report["energy_affine_exact"] = affine_ok

    gaps = {}
    for label, t, phi in (("start", 0, phi0), ("end", 1, phi1)):
        got = maximal_segment(phi0, phi1, t, kmax)
        rel = compare_metrics(got, phi).relation
        gaps[label] = {"recovered": rel == "eq", "relation": rel}
    report["endpoint_recovery"] = gaps
    return report
