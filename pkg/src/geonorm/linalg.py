"""Exact dense linear algebra over either scalar backend.

Vectors are tuples of field elements, matrices are tuples of row tuples.
Everything works through the arithmetic operators of the elements, so the
same code runs over plain Fractions and over t-adic rational functions.
"""

from __future__ import annotations


class SingularMatrixError(ValueError):
    pass


def identity(field, d):
    one, zero = field.one, field.zero
    return tuple(
        tuple(one if i == j else zero for j in range(d)) for i in range(d)
    )


def transpose(A):
    return tuple(zip(*A)) if A else ()


def _zero_like(x):
    return x - x


def mat_vec(A, v):
    return tuple(_dot(row, v) for row in A)


def mat_mul(A, B):
    Bt = transpose(B)
    return tuple(tuple(_dot(row, col) for col in Bt) for row in A)


def _dot(u, v):
    acc = _zero_like(u[0])
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot column indices)."""
    R = [list(r) for r in rows]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(R)) if R[i][c]), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c]
        R[r] = [x / inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return [tuple(row) for row in R[:r]], pivots


def rank(rows):
    return len(rref(rows)[0])


def invert(field, A):
    """Inverse of a square matrix; raises SingularMatrixError if singular."""
    d = len(A)
    aug = [list(A[i]) + list(identity(field, d)[i]) for i in range(d)]
    reduced, pivots = rref(aug)
    if pivots[:d] != list(range(d)) or len(reduced) < d:
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[d:]) for row in reduced)


def determinant(A):
    """Determinant by Gaussian elimination with exact field arithmetic."""
    d = len(A)
    rows = [list(r) for r in A]
    det = None
    sign = 1
    for col in range(d):
        pivot_row = next(
            (r for r in range(col, d) if rows[r][col] != _zero_like(rows[r][col])),
            None,
        )
        if pivot_row is None:
            return _zero_like(rows[0][0])
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            sign = -sign
        pivot = rows[col][col]
        det = pivot if det is None else det * pivot
        for r in range(col + 1, d):
            factor = rows[r][col] / pivot
            rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det if sign == 1 else -det


def solve_from_inverse(Ainv, b):
    return tuple(_dot(row, b) for row in Ainv)


def kernel(rows):
    """Basis of the right null space of the matrix given by ``rows``."""
    if not rows:
        return []
    ncols = len(rows[0])
    R, pivots = rref(rows)
    zero = _zero_like(rows[0][0])
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [zero] * ncols
        vec[free] = _one_like(rows[0][0])
        for r, pc in enumerate(pivots):
            vec[pc] = -R[r][free]
        basis.append(tuple(vec))
    return basis


def _one_like(x):
    z = _zero_like(x)
    return z + 1


def span_basis(vectors):
    """Independent subset spanning the same space, as echelonized rows."""
    R, _ = rref(vectors)
    return [row for row in R if any(row)]


def in_span(vectors, v):
    if not vectors:
        return not any(v)
    return rank(list(vectors) + [v]) == rank(list(vectors))


def intersect_spans(U, V):
    """Basis of span(U) n span(V); U, V are lists of vectors."""
    if not U or not V:
        return []
    # x in both spans: x = sum a_i U_i = sum b_j V_j; solve for (a, b)
    rows = []
    ncoef = len(U) + len(V)
    dim = len(U[0])
    for coord in range(dim):
        row = [u[coord] for u in U] + [-v[coord] for v in V]
        rows.append(tuple(row))
    basis = []
    for k in kernel(rows):
        a = k[: len(U)]
        vec = tuple(
            _dot(a, tuple(u[coord] for u in U)) for coord in range(dim)
        )
        if any(vec):
            basis.append(vec)
    return span_basis(basis)


def sum_spans(U, V):
    return span_basis(list(U) + list(V))


def extend_independent(current, candidates):
    """Vectors from ``candidates`` independent of ``current`` and each other."""
    picked = []
    base = list(current)
    r = rank(base) if base else 0
    for v in candidates:
        trial = base + picked + [v]
        if rank(trial) > r + len(picked):
            picked.append(v)
    return picked
