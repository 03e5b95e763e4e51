"""Compiled two-pointer sweeps for the decision machinery.

These loops are inherently sequential (each pointer position depends on the
previous one), so they are the one part of the package that cannot be
vectorized; numba compiles them to native code.  When numba is missing the
same functions run as plain Python, which is correct but slow on large
inputs.

Conventions shared with the callers:

* all arrays are 1-based with slot 0 unused; prefix sums A have length n+1,
* `pts`/`mat` are the padded point and matrix arrays of a MetricPath, with
  `use_matrix` selecting which one is live (the other is a 1x1 dummy),
* `strict` replaces every "<= lam" with "< lam",
* index sentinels: n+1 encodes "no such index" for the beta/delta sweeps
  (a +infinity stand-in), i-1 encodes it for the alpha sweep,
* every kernel returns an operation count: the number of O(1) feasibility
  tests it performed (used by budget assertions).

Distance arithmetic matches MetricPath.dist term for term; several callers
compare recomputed values for exact equality, so the accumulation order
here must never drift from the scalar implementation.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


@njit(cache=True)
def _kdist(pts, mat, use_matrix, u, v):
    if use_matrix:
        return mat[u, v]
    acc = 0.0
    for t in range(pts.shape[1]):
        dd = pts[u, t] - pts[v, t]
        acc += dd * dd
    return math.sqrt(acc)


@njit(cache=True)
def sweep_delta(A, pts, mat, use_matrix, n, lam, strict):
    """I_i(delta) for all i: smallest j >= i with delta(i,j) within lam.

    delta(i,i) is the full path length; for j > i the route through the
    shortcut costs (A[i] + |v_i v_j|) + (A[n] - A[j]).  Both the per-row
    feasible set and the index sequence are monotone, so one forward
    pointer suffices.
    """
    out = np.empty(n + 1, np.int64)
    out[0] = 0
    total = A[n] - A[1]
    ops = 1
    if (total < lam) if strict else (total <= lam):
        for i in range(1, n + 1):
            out[i] = i
        return out, ops
    j = 1
    for i in range(1, n + 1):
        if j <= i:
            j = i + 1
        while j <= n:
            ops += 1
            v = (A[i] + _kdist(pts, mat, use_matrix, i, j)) + (A[n] - A[j])
            if (v < lam) if strict else (v <= lam):
                break
            j += 1
        if j > n:
            for i2 in range(i, n + 1):
                out[i2] = n + 1
            return out, ops
        out[i] = j
    return out, ops


@njit(cache=True)
def sweep_beta(A, pts, mat, use_matrix, n, lam, strict, k_beta):
    """I_i(beta) for all i, given k_beta = smallest k with d_P(k,n) within lam.

    Rows i >= k_beta are feasible at j = i already.  A row i < k_beta is
    feasible at j iff j >= k_beta and the worst bridge rider v_{k_beta-1}
    makes it: ((A[k_beta-1] - A[i]) + |v_i v_j|) + (A[n] - A[j]) within lam.
    Those rows are walked from i = k_beta-1 downward; the answer column
    only moves right.
    """
    out = np.empty(n + 1, np.int64)
    out[0] = 0
    ops = 0
    for i in range(k_beta, n + 1):
        out[i] = i
    if k_beta <= 1:
        return out, ops
    j = k_beta if k_beta <= n else n + 1
    for i in range(min(k_beta - 1, n), 0, -1):
        while j <= n:
            ops += 1
            v = ((A[k_beta - 1] - A[i]) + _kdist(pts, mat, use_matrix, i, j)) + (A[n] - A[j])
            if (v < lam) if strict else (v <= lam):
                break
            j += 1
        if j > n:
            for i2 in range(i, 0, -1):
                out[i2] = n + 1
            return out, ops
        out[i] = j
    return out, ops


@njit(cache=True)
def sweep_alpha(A, pts, mat, use_matrix, n, lam, strict, k_alpha):
    """I_i(alpha) for all i, given k_alpha = largest k with d_P(1,k) within lam.

    Rows i > k_alpha have no feasible j (encoded as i-1).  For i <= k_alpha
    every j <= k_alpha works; beyond that the worst bridge rider is
    v_{k_alpha+1}: ((A[i] + |v_i v_j|) + (A[j] - A[k_alpha+1])) within lam,
    a test that only gets harder as j grows, so a right-to-left pointer
    shared across rows finds the largest feasible j.
    """
    out = np.empty(n + 1, np.int64)
    out[0] = 0
    ops = 0
    for i in range(k_alpha + 1, n + 1):
        out[i] = i - 1
    if k_alpha < 1:
        return out, ops
    j = n
    for i in range(1, k_alpha + 1):
        while j > k_alpha:
            ops += 1
            v = (A[i] + _kdist(pts, mat, use_matrix, i, j)) + (A[j] - A[k_alpha + 1])
            if (v < lam) if strict else (v <= lam):
                break
            j -= 1
        out[i] = j
    return out, ops


@njit(cache=True)
def sweep_g(A, n, lam, strict):
    """g[j] = largest k in [j,n] with d_P(j,k) within lam, for all j.

    Pure prefix-sum comparisons; the pointer never moves left.
    """
    out = np.empty(n + 1, np.int64)
    out[0] = 0
    ops = 0
    k = 1
    for j in range(1, n + 1):
        if k < j:
            k = j
        while k < n:
            ops += 1
            v = A[k + 1] - A[j]
            if (v < lam) if strict else (v <= lam):
                k += 1
            else:
                break
        out[j] = k
    return out, ops
