"""Independent reference computations for the test suite.

Everything in this file is written against plain ``Fraction`` arithmetic and
shares no code with the library under test: rank counting has its own
elimination loop, concave envelopes go through explicit convex combinations,
marginal minimization enumerates crossing parameters, and integrals use
closed-form antiderivatives.  When a test compares a library value against an
oracle value, the only shared dependency is the stdlib.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


# ---------------------------------------------------------------------------
# Rational linear algebra (self-contained).
# ---------------------------------------------------------------------------


def rank(rows) -> int:
    """Row rank of a matrix of Fractions, by plain Gaussian elimination."""
    mat = [list(map(Fraction, r)) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
    return r


def intersection_dim(U, V) -> int:
    """dim(span U r span V) via dim U + dim V - dim(U + V)."""
    if not U or not V:
        return 0
    return rank(U) + rank(V) - rank(list(U) + list(V))


def trivial_spectrum(basis0, weights0, basis1, weights1):
    """Relative spectrum of two diagonal norms over trivially valued Q.

    Counts multiplicities through filtration dimensions only: with
    F_i(s) = span of basis vectors of weight >= s, the number of spectrum
    entries equal to a - b is the mixed second difference of
    dim(F_0(a) r F_1(b)) over the two weight grids.  No common basis is
    ever constructed.
    """
    lv0 = sorted(set(weights0), reverse=True)
    lv1 = sorted(set(weights1), reverse=True)

    def cut(basis, weights, levels, i):
        if i < 0:
            return []
        s = levels[i]
        return [v for v, w in zip(basis, weights) if w >= s]

    def meet(i, j):
        u = cut(basis0, weights0, lv0, i)
        v = cut(basis1, weights1, lv1, j)
        return intersection_dim(u, v)

    out = []
    for i, a in enumerate(lv0):
        for j, b in enumerate(lv1):
            count = (meet(i, j) - meet(i - 1, j)
                     - meet(i, j - 1) + meet(i - 1, j - 1))
            out.extend([a - b] * count)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Concave closures by explicit convex combinations (dimension <= 2).
# ---------------------------------------------------------------------------


def concave_value_1d(points, y):
    """Concave-closure value at y of finitely many (x, value) pairs.

    Maximizes over single points and two-point combinations; by Caratheodory
    that is exhaustive on a line.  Returns None when y is outside the hull.
    """
    y = Fraction(y)
    best = None
    for (x, v) in points:
        if x == y and (best is None or v > best):
            best = v
    for (x0, v0), (x1, v1) in itertools.combinations(points, 2):
        if x0 == x1:
            continue
        lam = (y - x0) / (x1 - x0)
        if 0 <= lam <= 1:
            cand = (1 - lam) * v0 + lam * v1
            if best is None or cand > best:
                best = cand
    return best


def concave_value_2d(points, y):
    """Concave-closure value at y in the plane: points, segments, triangles."""
    y = tuple(Fraction(c) for c in y)
    best = None

    def consider(val):
        nonlocal best
        if best is None or val > best:
            best = val

    for (x, v) in points:
        if tuple(x) == y:
            consider(v)
    for (x0, v0), (x1, v1) in itertools.combinations(points, 2):
        dx = (x1[0] - x0[0], x1[1] - x0[1])
        dy = (y[0] - x0[0], y[1] - x0[1])
        if dx[0] * dy[1] != dx[1] * dy[0]:
            continue
        if dx[0] != 0:
            lam = dy[0] / dx[0]
        elif dx[1] != 0:
            lam = dy[1] / dx[1]
        else:
            continue
        if 0 <= lam <= 1:
            consider((1 - lam) * v0 + lam * v1)
    for (x0, v0), (x1, v1), (x2, v2) in itertools.combinations(points, 3):
        # barycentric coordinates by Cramer's rule
        det = ((x1[0] - x0[0]) * (x2[1] - x0[1])
               - (x2[0] - x0[0]) * (x1[1] - x0[1]))
        if det == 0:
            continue
        l1 = ((y[0] - x0[0]) * (x2[1] - x0[1])
              - (x2[0] - x0[0]) * (y[1] - x0[1])) / det
        l2 = ((x1[0] - x0[0]) * (y[1] - x0[1])
              - (y[0] - x0[0]) * (x1[1] - x0[1])) / det
        l0 = 1 - l1 - l2
        if l0 >= 0 and l1 >= 0 and l2 >= 0:
            consider(l0 * v0 + l1 * v1 + l2 * v2)
    return best


def concave_value(points, y):
    if isinstance(y, (int, Fraction)) or len(y) == 1:
        coord = y if isinstance(y, (int, Fraction)) else y[0]
        pts = [(x[0] if not isinstance(x, (int, Fraction)) else x, v)
               for x, v in points]
        return concave_value_1d(pts, coord)
    return concave_value_2d(points, y)


# ---------------------------------------------------------------------------
# Discrete double conjugation on a one-dimensional grid.
# ---------------------------------------------------------------------------


def grid_envelope_1d(f, slope_lo, slope_hi, v,
                     radius=Fraction(10), step=Fraction(1, 4)):
    """Largest convex minorant with slopes in [slope_lo, slope_hi], at v.

    Discrete double Legendre transform: conjugate over a sample grid of
    width ``radius`` and spacing ``step``, slopes on the same spacing.
    Exact at grid points whenever the input's breakpoints and admissible
    slopes lie on the grid and the radius clears every crossing.
    """
    slope_lo, slope_hi = Fraction(slope_lo), Fraction(slope_hi)
    v = Fraction(v)
    samples = []
    x = -radius
    while x <= radius:
        samples.append(x)
        x += step
    slopes = []
    y = slope_lo
    while y <= slope_hi:
        slopes.append(y)
        y += step
    if slopes[-1] != slope_hi:
        slopes.append(slope_hi)
    best = None
    for s in slopes:
        conj = max(s * x - f(x) for x in samples)
        cand = s * v - conj
        if best is None or cand > best:
            best = cand
    return best


# ---------------------------------------------------------------------------
# Exact minimization over the segment parameter.
# ---------------------------------------------------------------------------


def min_over_t(pieces, v, tau=0):
    """min over t in [0,1] of max_i(gt_i*t + <gv_i, v> + c_i) - tau*t.

    ``pieces`` is a list of (gt, gv, c) with gt, c Fractions and gv a tuple.
    The objective is convex piecewise linear in t, so the minimum sits at an
    endpoint or at a crossing of two affine forms; all candidates are
    enumerated exactly.
    """
    tau = Fraction(tau)
    v = tuple(Fraction(c) for c in v)
    lines = []
    for gt, gv, c in pieces:
        off = Fraction(c) + sum(Fraction(g) * x for g, x in zip(gv, v))
        lines.append((Fraction(gt) - tau, off))

    def val(t):
        return max(a * t + b for a, b in lines)

    candidates = {Fraction(0), Fraction(1)}
    for (a0, b0), (a1, b1) in itertools.combinations(lines, 2):
        if a0 == a1:
            continue
        t = (b1 - b0) / (a0 - a1)
        if 0 < t < 1:
            candidates.add(t)
    return min(val(t) for t in candidates)


# ---------------------------------------------------------------------------
# Exact integrals of piecewise linear data.
# ---------------------------------------------------------------------------


def trapezoid(samples):
    """Integral of a function affine between consecutive (x, value) samples."""
    total = Fraction(0)
    pts = sorted((Fraction(x), Fraction(v)) for x, v in samples)
    for (x0, v0), (x1, v1) in zip(pts, pts[1:]):
        total += (x1 - x0) * (v0 + v1) / 2
    return total


def triangle_area(p0, p1, p2):
    return abs((p1[0] - p0[0]) * (p2[1] - p0[1])
               - (p2[0] - p0[0]) * (p1[1] - p0[1])) / 2


def triangles_integral(triangles, func):
    """Integral of ``func`` over a union of triangles, assuming it is affine
    on each one (average of vertex values times area)."""
    total = Fraction(0)
    for tri in triangles:
        vals = [func(p) for p in tri]
        total += triangle_area(*tri) * sum(vals) / 3
    return total


def abs_power_integral_1d(alpha, beta, a, b, p):
    """Exact integral of |alpha + beta*y|**p over [a, b], integer p >= 1.

    Uses the global antiderivative B(s) = sign(s)|s|**(p+1)/(p+1) of |s|**p
    after the substitution s = alpha + beta*y.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    a, b = Fraction(a), Fraction(b)
    if beta == 0:
        return abs(alpha) ** p * (b - a)

    def anti(s):
        mag = abs(s) ** (p + 1)
        return mag if s >= 0 else -mag

    return (anti(alpha + beta * b) - anti(alpha + beta * a)) / (beta * (p + 1))


# ---------------------------------------------------------------------------
# Brute-force graded and quotient computations.
# ---------------------------------------------------------------------------


def max_decomposition_weight(weights_by_point, a, k):
    """Max of sum of degree-one weights over k-fold decompositions of a.

    ``weights_by_point`` maps degree-one lattice points (tuples) to weights;
    exhaustive recursion, intended for tiny instances only.
    """
    points = list(weights_by_point)

    def rec(target, slots):
        if slots == 0:
            return Fraction(0) if all(c == 0 for c in target) else None
        best = None
        for pt in points:
            rest = tuple(t - c for t, c in zip(target, pt))
            if any(c < 0 for c in rest):
                continue
            sub = rec(rest, slots - 1)
            if sub is None:
                continue
            cand = weights_by_point[pt] + sub
            if best is None or cand > best:
                best = cand
        return best

    return rec(tuple(a), k)


def coset_sup(norm_eval, v, subspace, coeff_range=3):
    """Quotient-norm oracle: sup of evaluate(v + w) over small-coefficient
    combinations w of the subspace vectors (on the -log scale the quotient
    norm is the supremum over coset representatives)."""
    dims = len(subspace)
    best = None
    span = [Fraction(i) for i in range(-coeff_range, coeff_range + 1)]
    for coeffs in itertools.product(span, repeat=dims):
        w = list(v)
        for c, vec in zip(coeffs, subspace):
            for i, x in enumerate(vec):
                w[i] = w[i] + c * x
        val = norm_eval(w)
        if best is None or val > best:
            best = val
    return best
