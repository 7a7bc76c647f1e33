"""Pure-numpy phase-1 simplex (fallback backend).

Same contract as the numba kernel: find x >= 0 with A @ x = b, b >= 0,
by minimizing the sum of artificial variables over a dense tableau with
Bland's rule (artificials never re-enter, so the walk terminates).
"""

import numpy as np

STATUS_FEASIBLE = 0
STATUS_INFEASIBLE = 1
STATUS_ITERATION_LIMIT = 2


def phase1_simplex(A, b, pivot_tol, feas_tol, max_iter):
    """Returns (status, x) with x of length A.shape[1]; x is meaningful
    only when status == STATUS_FEASIBLE."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    m, n = A.shape
    tableau = np.hstack([A, np.eye(m), b[:, None]])
    cost = np.concatenate([-A.sum(axis=0), np.zeros(m), [-b.sum()]])
    basis = np.arange(n, n + m)
    x = np.zeros(n)

    for _ in range(max_iter):
        negative = cost[:n] < -pivot_tol
        if not negative.any():
            break
        col = int(np.argmax(negative))  # first negative reduced cost: Bland

        column = tableau[:, col]
        positive = column > pivot_tol
        if not positive.any():
            return STATUS_INFEASIBLE, x
        ratios = np.full(m, np.inf)
        ratios[positive] = tableau[positive, -1] / column[positive]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + pivot_tol)[0]
        row = int(ties[np.argmin(basis[ties])])  # smallest basic index: Bland

        tableau[row] /= tableau[row, col]
        eliminate = tableau[:, col].copy()
        eliminate[row] = 0.0
        tableau -= np.outer(eliminate, tableau[row])
        cost -= cost[col] * tableau[row]
        basis[row] = col
    else:
        return STATUS_ITERATION_LIMIT, x

    infeasibility = -cost[-1]
    if infeasibility > feas_tol:
        return STATUS_INFEASIBLE, x
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = max(tableau[i, -1], 0.0)
    return STATUS_FEASIBLE, x
