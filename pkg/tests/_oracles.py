"""Slow, obviously-correct reference computations used only by the tests."""
import itertools
import math

import numpy as np
from scipy.linalg import expm


def brute_rlap(cost):
    """Minimum over every injective column -> row map of an (n2 x n1) matrix."""
    cost = np.asarray(cost, dtype=float)
    n2, n1 = cost.shape
    cols = np.arange(n1)
    best, arg = math.inf, None
    for rows in itertools.permutations(range(n2), n1):
        v = float(cost[list(rows), cols].sum())
        if v < best:
            best, arg = v, rows
    return best, arg


def linear_matrix(l1, l2, alpha):
    return (np.asarray(l1)[None, :] / alpha - alpha * np.asarray(l2)[:, None]) ** 2


def exp_matrix(l1, l2, alpha, t):
    return (np.exp((t / alpha) * np.asarray(l1))[None, :] - np.exp(t * alpha * np.asarray(l2))[:, None]) ** 2


def brute_linear(l1, l2, alpha):
    return brute_rlap(linear_matrix(l1, l2, alpha))


def lap_value(l1, l2, alpha):
    """Exact LAP optimum via scipy on the full matrix, independent of the package."""
    from scipy.optimize import linear_sum_assignment

    c = linear_matrix(l1, l2, alpha)
    r, col = linear_sum_assignment(c)
    return float(c[r, col].sum())


def exp_lap_value(l1, l2, alpha, t):
    from scipy.optimize import linear_sum_assignment

    c = exp_matrix(l1, l2, alpha, t)
    r, col = linear_sum_assignment(c)
    return float(c[r, col].sum())


def bisect_root(f, lo, hi, tol=1e-14, iters=400):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def dense_laplacian(n, edges):
    a = np.zeros((n, n))
    for i, j in edges:
        if i == j:
            a[i, i] += 2
        else:
            a[i, j] += 1
            a[j, i] += 1
    return a - np.diag(a.sum(axis=1))


def heat(l, t):
    return expm(t * np.asarray(l, dtype=float))
