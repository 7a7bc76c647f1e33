"""JIT-compiled phase-1 simplex (default backend).

Loop-level counterpart of ``simplex_numpy.phase1_simplex``: the pivot
search, ratio test, and row elimination run inside one @njit kernel, which
matters once the vertex count reaches 2^16 columns.
"""

import numpy as np
from numba import njit

STATUS_FEASIBLE = 0
STATUS_INFEASIBLE = 1
STATUS_ITERATION_LIMIT = 2


@njit(cache=True)
def _phase1_kernel(A, b, pivot_tol, feas_tol, max_iter):
    m, n = A.shape
    width = n + m + 1
    tableau = np.zeros((m, width))
    for i in range(m):
        for j in range(n):
            tableau[i, j] = A[i, j]
        tableau[i, n + i] = 1.0
        tableau[i, width - 1] = b[i]

    cost = np.zeros(width)
    for j in range(n):
        s = 0.0
        for i in range(m):
            s += A[i, j]
        cost[j] = -s
    total = 0.0
    for i in range(m):
        total += b[i]
    cost[width - 1] = -total

    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        basis[i] = n + i

    x = np.zeros(n)
    for _ in range(max_iter):
        # Bland's rule: lowest-index structural column pricing negative.
        col = -1
        for j in range(n):
            if cost[j] < -pivot_tol:
                col = j
                break
        if col < 0:
            infeasibility = -cost[width - 1]
            if infeasibility > feas_tol:
                return STATUS_INFEASIBLE, x
            for i in range(m):
                if basis[i] < n:
                    value = tableau[i, width - 1]
                    x[basis[i]] = value if value > 0.0 else 0.0
            return STATUS_FEASIBLE, x

        best = np.inf
        for i in range(m):
            if tableau[i, col] > pivot_tol:
                ratio = tableau[i, width - 1] / tableau[i, col]
                if ratio < best:
                    best = ratio
        if best == np.inf:
            return STATUS_INFEASIBLE, x
        # among (near-)ties take the row whose basic variable has the
        # smallest index, completing Bland's anti-cycling rule
        row = -1
        for i in range(m):
            if tableau[i, col] > pivot_tol:
                ratio = tableau[i, width - 1] / tableau[i, col]
                if ratio <= best + pivot_tol and (row < 0 or basis[i] < basis[row]):
                    row = i

        pivot = tableau[row, col]
        for j in range(width):
            tableau[row, j] /= pivot
        for i in range(m):
            if i != row:
                factor = tableau[i, col]
                if factor != 0.0:
                    for j in range(width):
                        tableau[i, j] -= factor * tableau[row, j]
        factor = cost[col]
        if factor != 0.0:
            for j in range(width):
                cost[j] -= factor * tableau[row, j]
        basis[row] = col

    return STATUS_ITERATION_LIMIT, x


def phase1_simplex(A, b, pivot_tol, feas_tol, max_iter):
    """Returns (status, x); see the numpy backend for the contract."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    return _phase1_kernel(A, b, float(pivot_tol), float(feas_tol), int(max_iter))
