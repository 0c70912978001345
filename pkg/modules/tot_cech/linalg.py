"""Exact linear algebra over QQ on top of sympy's DomainMatrix."""

import logging

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)


def _dm(rows, ncols):
    return DomainMatrix([[QQ.convert(c) for c in row] for row in rows], (len(rows), ncols), QQ)


def rref(rows, ncols):
    """Reduced row echelon form as (rows, pivot columns); empty shapes short-circuit."""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = _dm(rows, ncols).rref()
    out = reduced.to_list()
    return [row for row in out if any(row)], tuple(pivots)


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {x : A x = 0}, one vector per free column in increasing column order."""
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [QQ(0)] * ncols
        v[f] = QQ(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(rows, ncols, rhs):
    """
    A particular solution of A x = rhs with every free variable set to zero,
    or None when the system is inconsistent.
    """
    if ncols == 0:
        return [] if not any(rhs) else None
    if not rows:
        return [QQ(0)] * ncols
    aug = [list(row) + [QQ.convert(b)] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [QQ(0)] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


def columns_to_rows(columns, nrows):
    """Transpose a list of column vectors into row lists."""
    return [[col[i] for col in columns] for i in range(nrows)]


def span_rank(vectors, dim):
    return rank([list(v) for v in vectors], dim)


def in_span(vectors, v, dim):
    if not any(v):
        return True
    return span_rank(list(vectors) + [v], dim) == span_rank(vectors, dim)


def extend_basis(base, candidates, dim):
    """Greedily pick candidates independent modulo span(base); the quotient representatives."""
    chosen = []
    current = [list(b) for b in base]
    r = span_rank(current, dim)
    for c in candidates:
        trial = current + [list(c)]
        r2 = span_rank(trial, dim)
        if r2 > r:
            chosen.append(list(c))
            current, r = trial, r2
    return chosen


def mat_vec(matrix, v):
    return [sum((a * b for a, b in zip(row, v)), QQ(0)) for row in matrix]


def mat_mul(a, b, inner):
    ncols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), QQ(0)) for j in range(ncols)]
            for i in range(len(a))]


def is_zero_matrix(matrix):
    return all(not any(row) for row in matrix)


class InvariantViolation(RuntimeError):
    """An identity that must hold exactly failed (d² ≠ 0, a non-cocycle obstruction, ...)."""
