"""Diagonalizable ultrametric norms on finite-dimensional spaces.

A norm is described by a diagonalizing basis together with rational
weights: the i-th basis vector has norm ``exp(-weights[i])``, and for
``v = sum a_i s_i`` the norm is ``max_i |a_i| * exp(-weights[i])``.
Everything is done on the -log scale, so ``evaluate`` returns
``min_i (valuation(a_i) + weights[i])``, an exact rational (``INF`` for 0).

The central construction is ``codiagonalize``: any two diagonalizable
norms over the same field admit a common diagonalizing basis.  Over the
trivially valued field this is a statement about pairs of vector-space
filtrations and is proved by a splitting argument; over the t-adic field
with integer weights it is the elementary divisor theorem for lattices,
computed by Smith normal form over the valuation ring.  The relative
spectrum, the d_p distances, the relative volume and the join (max) all
read off the common basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from . import linalg
from .field import (
    INF,
    FieldError,
    TADIC,
    TRIVIAL,
    field_by_name,
    format_fraction,
    parse_fraction,
)


class NormError(ValueError):
    """Raised on malformed norms or unsupported codiagonalization input."""


class DiagNorm:
    """A diagonalizable norm: basis vectors plus -log weights.

    Args:
        field: scalar backend (``TRIVIAL`` or ``TADIC``).
        basis: tuple of basis vectors, each a tuple of field elements in
            ambient coordinates.  Must be linearly independent and square.
        weights: one rational per basis vector; ``norm(s_i) = e^{-w_i}``.
    """

    __slots__ = ("field", "basis", "weights", "_inv")

    def __init__(self, field, basis, weights):
        basis = tuple(tuple(field.of(x) for x in vec) for vec in basis)
        weights = tuple(Fraction(w) for w in weights)
        if len(basis) != len(weights):
            raise NormError("basis and weights must have equal length")
        if any(len(vec) != len(basis) for vec in basis):
            raise NormError("basis must be square (ambient dim = count)")
        self.field = field
        self.basis = basis
        self.weights = weights
        self._inv = None
        # fail fast on dependent bases; identity is recognized cheaply
        self._inverse()

    # -- construction helpers ------------------------------------------------

    @classmethod
    def standard(cls, field, weights) -> "DiagNorm":
        """Norm diagonal in the standard basis with the given weights."""
        d = len(weights)
        basis = linalg.identity(field, d)
        return cls(field, basis, weights)

    @classmethod
    def trivial(cls, field, dim) -> "DiagNorm":
        return cls.standard(field, (Fraction(0),) * dim)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def is_standard_basis(self) -> bool:
        f = self.field
        return all(
            vec[j] == (f.one if i == j else f.zero)
            for i, vec in enumerate(self.basis)
            for j in range(len(vec))
        )

    def _inverse(self):
        if self._inv is None:
            matrix = tuple(
                tuple(self.basis[c][r] for c in range(self.dim))
                for r in range(self.dim)
            )
            if self.is_standard_basis():
                self._inv = matrix
            else:
                try:
                    self._inv = linalg.invert(self.field, matrix)
                except linalg.SingularMatrixError:
                    raise NormError("basis vectors are linearly dependent") from None
        return self._inv

    # -- evaluation -----------------------------------------------------------

    def coordinates(self, v):
        """Coordinates of an ambient vector in the diagonalizing basis."""
        v = tuple(self.field.of(x) for x in v)
        if len(v) != self.dim:
            raise NormError(f"vector has length {len(v)}, expected {self.dim}")
        return linalg.solve_from_inverse(self._inverse(), v)

    def evaluate(self, v):
        """-log of the norm of ``v``: an exact rational, or INF iff v = 0.

        Examples:
            >>> n = DiagNorm.standard(TRIVIAL, (Fraction(0), Fraction(1)))
            >>> n.evaluate((Fraction(3), Fraction(0)))
            Fraction(0, 1)
            >>> n.evaluate((Fraction(0), Fraction(0)))
            INF
        """
        coords = self.coordinates(v)
        best = INF
        for a, w in zip(coords, self.weights):
            val = self.field.valuation(a)
            if val is INF:
                continue
            cand = val + w
            if cand < best:
                best = cand
        return best

    # -- equality: two diagonal norms agree iff they agree on both bases ------

    def __eq__(self, other):
        if not isinstance(other, DiagNorm):
            return NotImplemented
        if self.field is not other.field or self.dim != other.dim:
            return False
        for vec in self.basis + other.basis:
            if self.evaluate(vec) != other.evaluate(vec):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        ws = ", ".join(format_fraction(w) for w in self.weights)
        return f"DiagNorm({self.field.name}, dim={self.dim}, weights=[{ws}])"

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return {
            "field": self.field.name,
            "dim": self.dim,
            "basis": [[self.field.to_json(x) for x in vec] for vec in self.basis],
            "weights": [format_fraction(w) for w in self.weights],
        }

    @classmethod
    def from_json(cls, obj) -> "DiagNorm":
        try:
            field = field_by_name(obj.get("field", "trivial"))
            basis = tuple(
                tuple(field.from_json(x) for x in vec) for vec in obj["basis"]
            )
            weights = tuple(parse_fraction(w) for w in obj["weights"])
        except (KeyError, TypeError, FieldError) as exc:
            raise NormError(f"malformed norm JSON: {exc}") from exc
        if "dim" in obj and obj["dim"] != len(weights):
            raise NormError("declared dim does not match weights")
        return cls(field, basis, weights)


# ---------------------------------------------------------------------------
# Codiagonalization.
# ---------------------------------------------------------------------------


def codiagonalize(n0: DiagNorm, n1: DiagNorm):
    """Common diagonalizing basis for two norms.

    Returns ``(basis, weights0, weights1)`` such that both input norms are
    diagonal in ``basis`` with the respective weights.  The result is
    verified vector by vector before returning.

    Over the trivially valued field the algorithm splits the pair of
    associated filtrations, taking jump values in decreasing order and
    picking complements inside the intersections.  Over the t-adic field
    the weights must be integers; the two unit balls are then lattices
    over the valuation ring and Smith normal form of the change-of-basis
    matrix produces the common basis.
    """
    if n0.field is not n1.field:
        raise NormError("cannot codiagonalize norms over different fields")
    if n0.dim != n1.dim:
        raise NormError("cannot codiagonalize norms of different dimensions")
    if n0.basis == n1.basis:
        result = (n0.basis, n0.weights, n1.weights)
    elif n0.field is TRIVIAL:
        result = _codiagonalize_filtrations(n0, n1)
    elif n0.field is TADIC:
        result = _codiagonalize_lattices(n0, n1)
    else:  # pragma: no cover - only two backends exist
        raise NormError(f"unsupported field {n0.field!r}")
    basis, w0, w1 = result
    for vec, a, b in zip(basis, w0, w1):
        if n0.evaluate(vec) != a or n1.evaluate(vec) != b:
            raise NormError("internal error: common basis failed verification")
    return result


def _filtration_step(norm: DiagNorm, s: Fraction):
    return [vec for vec, w in zip(norm.basis, norm.weights) if w >= s]


def _codiagonalize_filtrations(n0: DiagNorm, n1: DiagNorm):
    d = n0.dim
    jumps0 = sorted(set(n0.weights), reverse=True)
    jumps1 = sorted(set(n1.weights), reverse=True)
    steps0 = {s: linalg.span_basis(_filtration_step(n0, s)) for s in jumps0}
    steps1 = {t: linalg.span_basis(_filtration_step(n1, t)) for t in jumps1}

    inter: dict[tuple[int, int], list] = {}

    def intersection(i: int, j: int):
        # F0^{jumps0[i]} n F1^{jumps1[j]}; out-of-range index means {0}
        if i < 0 or j < 0:
            return []
        if (i, j) not in inter:
            inter[(i, j)] = linalg.intersect_spans(steps0[jumps0[i]], steps1[jumps1[j]])
        return inter[(i, j)]

    basis, w0, w1 = [], [], []
    for i, s in enumerate(jumps0):
        for j, t in enumerate(jumps1):
            W = intersection(i, j)
            if not W:
                continue
            U = linalg.sum_spans(intersection(i - 1, j), intersection(i, j - 1))
            picked = linalg.extend_independent(U + basis, W)
            for vec in picked:
                basis.append(vec)
                w0.append(s)
                w1.append(t)
    if len(basis) != d:
        raise NormError("internal error: filtration splitting lost dimensions")
    return tuple(basis), tuple(w0), tuple(w1)


def _codiagonalize_lattices(n0: DiagNorm, n1: DiagNorm):
    if any(w.denominator != 1 for w in n0.weights + n1.weights):
        raise NormError(
            "t-adic codiagonalization requires integer weights "
            "(the value group is Z)"
        )
    from .field import RatFunc

    field = TADIC
    d = n0.dim

    def lattice_columns(n: DiagNorm):
        # unit ball = R-span of t^{-w_i} s_i
        return [
            tuple(field.of(x) * RatFunc.t_power(-int(w)) for x in vec)
            for vec, w in zip(n.basis, n.weights)
        ]

    L0 = lattice_columns(n0)  # list of column vectors
    L1 = lattice_columns(n1)
    # matrix with columns L0 (ambient rows)
    M0 = tuple(tuple(L0[c][r] for c in range(d)) for r in range(d))
    M0inv = linalg.invert(field, M0)
    # change of basis: columns of M express L1 in terms of L0
    cols = [linalg.mat_vec(M0inv, L1[c]) for c in range(d)]
    M = tuple(tuple(cols[c][r] for c in range(d)) for r in range(d))

    A = [list(row) for row in M]
    P = [list(row) for row in linalg.identity(field, d)]  # accumulates row ops

    def row_op(dst, src, factor):
        A[dst] = [a - factor * b for a, b in zip(A[dst], A[src])]
        P[dst] = [a - factor * b for a, b in zip(P[dst], P[src])]

    exponents = []
    for k in range(d):
        # min-valuation pivot in the trailing submatrix, smallest (i, j) tie
        best = None
        for i in range(k, d):
            for j in range(k, d):
                val = field.valuation(A[i][j])
                if val is INF:
                    continue
                if best is None or val < best[0]:
                    best = (val, i, j)
        if best is None:
            raise NormError("internal error: singular change-of-basis matrix")
        _, pi, pj = best
        A[k], A[pi] = A[pi], A[k]
        P[k], P[pi] = P[pi], P[k]
        for row in A:
            row[k], row[pj] = row[pj], row[k]
        pivot = A[k][k]
        for i in range(k + 1, d):
            if A[i][k]:
                row_op(i, k, A[i][k] / pivot)
        for j in range(k + 1, d):
            if A[k][j]:
                factor = A[k][j] / pivot
                for row in A:
                    row[j] = row[j] - factor * row[k]
        exponents.append(int(field.valuation(pivot)))

    # common basis: columns of M0 * P^{-1}
    Pinv = linalg.invert(field, tuple(tuple(row) for row in P))
    C = linalg.mat_mul(M0, Pinv)
    basis = tuple(tuple(C[r][c] for r in range(d)) for c in range(d))
    w0 = tuple(Fraction(0) for _ in range(d))
    w1 = tuple(Fraction(-e) for e in exponents)
    return basis, w0, w1


def smith_exponents(n0: DiagNorm, n1: DiagNorm):
    """Invariant-factor exponents of the two unit lattices (t-adic only)."""
    _, w0, w1 = codiagonalize(n0, n1)
    return tuple(sorted(int(a - b) for a, b in zip(w0, w1)))


# ---------------------------------------------------------------------------
# Spectrum, distances, volume, join.
# ---------------------------------------------------------------------------


def spectrum(n0: DiagNorm, n1: DiagNorm):
    """Relative spectrum: sorted weight differences over a common basis.

    Entry ``lambda_i = w0_i - w1_i = log(n1(s_i) / n0(s_i))`` for a common
    diagonalizing basis, sorted increasingly.  Independent of the choice of
    common basis.
    """
    _, w0, w1 = codiagonalize(n0, n1)
    return tuple(sorted(a - b for a, b in zip(w0, w1)))


def distance(n0: DiagNorm, n1: DiagNorm, p=1):
    """d_p distance, normalized by dimension.

    For finite integer ``p >= 1`` returns the p-th power of the distance,
    ``(1/d) * sum |lambda_i|^p``, which stays rational.  For ``p = math.inf``
    returns ``max |lambda_i|``.  Non-integer finite p would force irrational
    values and is rejected.
    """
    lam = spectrum(n0, n1)
    if p == math.inf:
        return max((abs(x) for x in lam), default=Fraction(0))
    p = Fraction(p)
    if p.denominator != 1 or p < 1:
        raise NormError("finite p must be an integer >= 1 for exact arithmetic")
    p = int(p)
    return Fraction(sum(abs(x) ** p for x in lam), len(lam))


def volume(n0: DiagNorm, n1: DiagNorm) -> Fraction:
    """Raw spectrum sum.  Cocycle: vol(a,b) + vol(b,c) = vol(a,c)."""
    return sum(spectrum(n0, n1), Fraction(0))


def join(n0: DiagNorm, n1: DiagNorm) -> DiagNorm:
    """Pointwise maximum of the two norms (minimum of the weights)."""
    basis, w0, w1 = codiagonalize(n0, n1)
    return DiagNorm(n0.field, basis, tuple(min(a, b) for a, b in zip(w0, w1)))


# ---------------------------------------------------------------------------
# Functorial constructions.
# ---------------------------------------------------------------------------


def det_norm(n: DiagNorm) -> DiagNorm:
    """Norm induced on the top exterior power (a line): weights add up.

    Normalized on the standard generator e_1 ^ ... ^ e_d.  The wedge of
    the presenting basis differs from it by det(basis), whose valuation
    shifts the weight; this makes the result independent of which
    diagonalizing basis presents the norm.
    """
    total = sum(n.weights, Fraction(0))
    total -= n.field.valuation(linalg.determinant(n.basis))
    return DiagNorm(n.field, ((n.field.one,),), (total,))


def sym_monomials(dim: int, m: int):
    """Exponent tuples of the degree-m monomials in ``dim`` variables."""
    out = []
    for combo in combinations_with_replacement(range(dim), m):
        expo = [0] * dim
        for i in combo:
            expo[i] += 1
        out.append(tuple(expo))
    return sorted(out)


def sym_power_norm(n: DiagNorm, m: int) -> DiagNorm:
    """m-th symmetric power: products of basis vectors, summed weights.

    The symmetric power is modelled as degree-m polynomials in the ambient
    coordinates; the basis vector for a multiset I is the polynomial
    product of the corresponding linear forms, and its weight is the sum
    of the factors' weights.
    """
    if m < 1:
        raise NormError("symmetric power needs m >= 1")
    field = n.field
    d = n.dim
    monos = sym_monomials(d, m)
    index = {e: i for i, e in enumerate(monos)}
    basis = []
    weights = []
    for combo in combinations_with_replacement(range(d), m):
        poly = {(0,) * d: field.one}
        # multiply the linear forms of the chosen basis vectors
        for i in combo:
            nxt = {}
            for expo, coeff in poly.items():
                for r, c in enumerate(n.basis[i]):
                    if not c:
                        continue
                    e2 = list(expo)
                    e2[r] += 1
                    e2 = tuple(e2)
                    nxt[e2] = nxt.get(e2, field.zero) + coeff * c
            poly = nxt
        col = [field.zero] * len(monos)
        for expo, coeff in poly.items():
            col[index[expo]] = coeff
        basis.append(tuple(col))
        weights.append(sum((n.weights[i] for i in combo), Fraction(0)))
    return DiagNorm(field, tuple(basis), tuple(weights))


def tensor_norm(n0: DiagNorm, n1: DiagNorm) -> DiagNorm:
    """Tensor product norm: product basis, summed weights."""
    if n0.field is not n1.field:
        raise NormError("tensor factors must share the field")
    field = n0.field
    basis = []
    weights = []
    for vec0, w0 in zip(n0.basis, n0.weights):
        for vec1, w1 in zip(n1.basis, n1.weights):
            basis.append(tuple(a * b for a in vec0 for b in vec1))
            weights.append(w0 + w1)
    return DiagNorm(field, tuple(basis), tuple(weights))


def quotient_norm(n: DiagNorm, spanning):
    """Quotient norm on V/W for W spanned by the given vectors.

    Returns ``(qnorm, project)``: the quotient norm is diagonal in the
    images of an adapted basis, and ``project`` maps an ambient vector to
    its quotient coordinates.  Uses the ultrametric exchange argument to
    build a diagonalizing basis of the original norm whose first vectors
    span W; the quotient then simply drops those coordinates.
    """
    field = n.field
    spanning = [tuple(field.of(x) for x in vec) for vec in spanning]
    W = linalg.span_basis([v for v in spanning if any(v)])
    k = len(W)
    if k == 0:
        raise NormError("quotient by the zero subspace is the norm itself")
    if k >= n.dim:
        raise NormError("quotient by the full space is zero-dimensional")

    vecs = list(n.basis)
    weights = list(n.weights)
    swapped = []
    for w in W:
        matrix_inv = linalg.invert(
            field,
            tuple(tuple(vecs[c][r] for c in range(n.dim)) for r in range(n.dim)),
        )
        coords = list(linalg.solve_from_inverse(matrix_inv, w))
        # remove components along already swapped-in W vectors (stay in W)
        for p in swapped:
            coords[p] = field.zero
        best = None
        for p, a in enumerate(coords):
            if p in swapped:
                continue
            val = field.valuation(a)
            if val is INF:
                continue
            cand = val + weights[p]
            if best is None or cand < best[0]:
                best = (cand, p)
        if best is None:
            raise NormError("spanning vectors are linearly dependent")
        value, p_star = best
        w_reduced = tuple(
            sum((coords[c] * vecs[c][r] for c in range(n.dim) if coords[c]),
                field.zero)
            for r in range(n.dim)
        )
        vecs[p_star] = w_reduced
        weights[p_star] = value
        swapped.append(p_star)

    remaining = [p for p in range(n.dim) if p not in swapped]
    qnorm = DiagNorm.standard(field, tuple(weights[p] for p in remaining))
    final_inv = linalg.invert(
        field,
        tuple(tuple(vecs[c][r] for c in range(n.dim)) for r in range(n.dim)),
    )

    def project(v):
        coords = linalg.solve_from_inverse(final_inv, tuple(field.of(x) for x in v))
        return tuple(coords[p] for p in remaining)

    return qnorm, project
