"""Exact dense linear algebra over the rationals.

Plain Gaussian elimination on numpy object arrays of Fractions.  Sizes in this
package stay at desk scale (a few hundred at most), so there is no pivoting
strategy beyond "first nonzero".
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalars import DomainError, zeros_matrix, EXACT


def _as_fraction_matrix(m):
    arr = np.empty(m.shape, dtype=object)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            arr[i, j] = Fraction(m[i, j])
    return arr


def rref(m):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    r = _as_fraction_matrix(m)
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = None
        for i in range(row, nrows):
            if r[i, col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        r[row] = r[row] / r[row, col]
        for i in range(nrows):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    return r, pivots


def rank(m):
    return len(rref(m)[1])


def nullspace(m):
    """Basis of the exact kernel, as columns of an object matrix (possibly 0 cols)."""
    r, pivots = rref(m)
    ncols = m.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = zeros_matrix(ncols, len(free), EXACT)
    for idx, fc in enumerate(free):
        basis[fc, idx] = Fraction(1)
        for prow, pcol in enumerate(pivots):
            basis[pcol, idx] = -r[prow, fc]
    return basis

def solve(a, b):
    """Solve a @ x = b exactly.  b may be a vector or a matrix of columns.

    Raises DomainError when the system is inconsistent or underdetermined.
    """
    b2 = b.reshape(-1, 1) if b.ndim == 1 else b
    nrows, ncols = a.shape
    aug = np.empty((nrows, ncols + b2.shape[1]), dtype=object)
    aug[:, :ncols] = a
    aug[:, ncols:] = b2
    r, pivots = rref(aug)
    if any(p >= ncols for p in pivots):
        raise DomainError("inconsistent linear system")
    if len(pivots) < ncols:
        raise DomainError("underdetermined linear system")
    x = zeros_matrix(ncols, b2.shape[1], EXACT)
    for prow, pcol in enumerate(pivots):
        x[pcol, :] = r[prow, ncols:]
    return x.reshape(-1) if b.ndim == 1 else x


def inverse(a):
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DomainError("inverse of a non-square matrix")
    ident = zeros_matrix(n, n, EXACT)
    for i in range(n):
        ident[i, i] = Fraction(1)
    try:
        return solve(a, ident)
    except DomainError as exc:
        raise DomainError("matrix is singular") from exc
