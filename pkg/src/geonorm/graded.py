"""Graded norms on the section ring of (P^n, O(m)).

Degree k sections are spanned by monomials indexed by lattice points of the
dilated simplex km*Delta_n (dehomogenized exponents); multiplication adds
exponents.  Over a trivially valued field every norm considered here is
diagonal in the monomial basis, so a graded norm is a weight per lattice
point per degree, submultiplicativity is superadditivity of weights, and
degree-one generation is a tropical (max-plus) convolution power.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, inf

from .field import TRIVIAL, format_fraction, parse_fraction
from .norms import DiagNorm, NormError


class GradedError(ValueError):
    pass


def lattice_points(n: int, d: int):
    """Lattice points of d*Delta_n: a in Z^n, a >= 0, sum a_i <= d."""
    if d < 0:
        return ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for c in range(remaining + 1):
            rec(prefix + [c], remaining - c, slots - 1)

    rec([], d, n)
    return tuple(sorted(out))


class SectionRing:
    """Monomial model of R(P^n, O(m)) = sum_k H^0(km * O(1))."""

    __slots__ = ("n", "m", "_bases")

    def __init__(self, n: int, m: int):
        if n < 1 or m < 1:
            raise GradedError("need n >= 1 and m >= 1")
        self.n = n
        self.m = m
        self._bases = {}

    def basis(self, k: int):
        if k not in self._bases:
            self._bases[k] = lattice_points(self.n, k * self.m)
        return self._bases[k]

    def h0(self, k: int) -> int:
        return comb(k * self.m + self.n, self.n)

    def __repr__(self):
        return f"SectionRing(n={self.n}, m={self.m})"

    def __eq__(self, other):
        return (isinstance(other, SectionRing)
                and (self.n, self.m) == (other.n, other.m))

    __hash__ = None


class GradedNorm:
    """Monomial-diagonal norms in every degree 1..kmax."""

    __slots__ = ("ring", "kmax", "_weights")

    def __init__(self, ring: SectionRing, weights_by_degree):
        weights = []
        for k, table in enumerate(weights_by_degree, start=1):
            basis = ring.basis(k)
            if set(table) != set(basis):
                raise GradedError(
                    f"degree {k} weights must cover exactly the "
                    f"{ring.h0(k)} monomials of km*Delta")
            weights.append({a: Fraction(table[a]) for a in basis})
        if not weights:
            raise GradedError("a graded norm needs at least degree one")
        self.ring = ring
        self.kmax = len(weights)
        self._weights = tuple(weights)

    def weight(self, k: int, a) -> Fraction:
        return self._weights[k - 1][tuple(a)]

    def degree_weights(self, k: int) -> dict:
        return self._weights[k - 1]

    def norm_at(self, k: int) -> DiagNorm:
        table = self._weights[k - 1]
        return DiagNorm.standard(
            TRIVIAL, tuple(table[a] for a in self.ring.basis(k)))

    def __eq__(self, other):
        if not isinstance(other, GradedNorm):
            return NotImplemented
        return (self.ring == other.ring and self.kmax == other.kmax
                and self._weights == other._weights)

    __hash__ = None

    def __repr__(self):
        return (f"GradedNorm(n={self.ring.n}, m={self.ring.m}, "
                f"kmax={self.kmax})")

    def to_json(self):
        return {
            "ring": {"n": self.ring.n, "m": self.ring.m},
            "degrees": {
                str(k): self.norm_at(k).to_json()
                for k in range(1, self.kmax + 1)
            },
        }

    @classmethod
    def from_json(cls, obj) -> "GradedNorm":
        ring = SectionRing(obj["ring"]["n"], obj["ring"]["m"])
        degrees = obj["degrees"]
        tables = []
        for k in range(1, len(degrees) + 1):
            norm = DiagNorm.from_json(degrees[str(k)])
            basis = ring.basis(k)
            if norm.dim != len(basis) or not norm.is_standard_basis():
                raise GradedError(
                    f"degree {k} norm must be monomial-diagonal of "
                    f"dimension {len(basis)}")
            tables.append(dict(zip(basis, norm.weights)))
        return cls(ring, tables)


def _degree_one_table(ring: SectionRing, source) -> dict:
    basis = ring.basis(1)
    if isinstance(source, DiagNorm):
        if source.dim != len(basis) or not source.is_standard_basis():
            raise GradedError("degree-one norm must be monomial-diagonal")
        return dict(zip(basis, source.weights))
    table = {tuple(a): Fraction(w) for a, w in dict(source).items()}
    if set(table) != set(basis):
        raise GradedError("degree-one weights must cover m*Delta exactly")
    return table


def generate_degree_one(ring: SectionRing, degree_one, kmax: int) -> GradedNorm:
    """Graded norm generated in degree one.

    Degree-k weight at a is the max of sum(beta_{a_i}) over decompositions
    a = a_1 + ... + a_k with each a_i in the degree-one basis: the quotient
    norm through Sym^k H^0 -> H^0(k), computed as a max-plus convolution
    power.  Superadditive, hence submultiplicative, by construction.
    """
    if kmax < 1:
        raise GradedError("kmax must be at least 1")
    w1 = _degree_one_table(ring, degree_one)
    tables = [w1]
    b1 = ring.basis(1)
    for k in range(2, kmax + 1):
        prev = tables[-1]
        table = {}
        for b, wb in prev.items():
            for a in b1:
                c = tuple(x + y for x, y in zip(a, b))
                w = wb + w1[a]
                if c not in table or w > table[c]:
                    table[c] = w
        tables.append(table)
    return GradedNorm(ring, tables)


def check_submultiplicative(gn: GradedNorm, kmax: int | None = None):
    """None if superadditive up to kmax, else the first violation (k,l,a,b)."""
    K = gn.kmax if kmax is None else min(kmax, gn.kmax)
    ring = gn.ring
    for k in range(1, K):
        wk = gn.degree_weights(k)
        for l in range(1, K - k + 1):
            wl = gn.degree_weights(l)
            wkl = gn.degree_weights(k + l)
            for a in ring.basis(k):
                wa = wk[a]
                for b in ring.basis(l):
                    c = tuple(x + y for x, y in zip(a, b))
                    if wkl[c] < wa + wl[b]:
                        return (k, l, a, b)
    return None


def graded_geodesic(gn0: GradedNorm, gn1: GradedNorm, t) -> GradedNorm:
    """Degreewise weight interpolation (1-t)*w0 + t*w1."""
    if gn0.ring != gn1.ring:
        raise GradedError("graded norms live on different rings")
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise NormError(f"geodesic time {t} outside [0, 1]")
    K = min(gn0.kmax, gn1.kmax)
    tables = []
    for k in range(1, K + 1):
        w0 = gn0.degree_weights(k)
        w1 = gn1.degree_weights(k)
        tables.append({a: (1 - t) * w0[a] + t * w1[a] for a in w0})
    return GradedNorm(gn0.ring, tables)


def asymptotic_stats(gn0: GradedNorm, gn1: GradedNorm, p, kmax: int | None = None,
                     oracle_limit=None):
    """Per-degree spectral statistics of the pair, normalized per unit degree.

    Degree-k relative spectrum is w0 - w1 on the monomial basis; the value
    reported is the p-th moment of the rescaled spectrum lambda/k under the
    uniform measure on the h0(k) monomials (max |lambda|/k for p = inf).
    For p = 1 this equals (k*h0(k))^-1 * sum |lambda|.  The sequence
    converges to the conjugate-profile integral when both inputs come from
    metrics; callers may pass that oracle value through for reporting.
    """
    if gn0.ring != gn1.ring:
        raise GradedError("graded norms live on different rings")
    K = min(gn0.kmax, gn1.kmax)
    if kmax is not None:
        K = min(K, kmax)
    values = []
    for k in range(1, K + 1):
        w0 = gn0.degree_weights(k)
        w1 = gn1.degree_weights(k)
        lam = [w0[a] - w1[a] for a in gn0.ring.basis(k)]
        if p == inf:
            val = max(abs(x) for x in lam) / k
        else:
            if not isinstance(p, int) or p < 1:
                raise GradedError("p must be an integer >= 1 or inf")
            val = Fraction(sum(abs(x / k) ** p for x in lam), len(lam))
        values.append((k, val))
    return values, oracle_limit


def serialize_counterexample(violation) -> dict:
    """Machine-readable form of a check_submultiplicative violation."""
    k, l, a, b = violation
    return {
        "k": k,
        "l": l,
        "a": list(a),
        "b": list(b),
    }
