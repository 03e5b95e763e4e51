"""Brute-force reference implementations, used as the referee in tests.

Everything here is computed from raw definitions: a shortest path in the
augmented graph either stays on the path or crosses the shortcut exactly
once (crossing twice can never help, by the triangle inequality), so the
graph distance of a pair is the minimum of three explicit routes.  The
diameter of an augmented graph is the maximum of that quantity over all
vertex pairs.  No evaluator code is shared with the fast pipeline beyond
dist/path_dist and the prefix-sum array, so agreement between the two is
evidence, not tautology.

Costs are O(n^2) per edge and O(n^4) per instance; a size guard refuses
inputs above a cap (default 200, override via the DOAP_ORACLE_CAP
environment variable or the cap= argument).
"""

from __future__ import annotations

import os

import numpy as np

from .metric_core import CandidateEdge, DiagnosticProfile, MetricPath

DEFAULT_ORACLE_CAP = 200


def resolve_oracle_cap(cap: int | None = None) -> int:
    """The effective size limit: explicit cap, else env override, else default."""
    if cap is not None:
        return int(cap)
    raw = os.environ.get("DOAP_ORACLE_CAP")
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"DOAP_ORACLE_CAP must be an integer, got {raw!r}") from None


def brute_pair_distance(path: MetricPath, e: CandidateEdge, u: int, v: int) -> float:
    """Graph distance between v_u and v_v after adding e: min of three routes."""
    path._check_vertex(u)
    path._check_vertex(v)
    if u > v:
        u, v = v, u
    i, j = path._check_edge(e)
    direct = path.path_dist(u, v)
    if i == j:
        return direct
    d = path.dist(i, j)
    A = path.A
    # Enter the shortcut at i and leave at j, or the other way round.
    r2 = (abs(float(A[i] - A[u])) + d) + abs(float(A[v] - A[j]))
    r3 = (abs(float(A[j] - A[u])) + d) + abs(float(A[v] - A[i]))
    return min(direct, r2, r3)


def _pair_dist_grid(path: MetricPath, e: CandidateEdge, uu: np.ndarray, vv: np.ndarray) -> np.ndarray:
    # Vectorized brute_pair_distance over 1-based index arrays, identical
    # arithmetic.  Swapping into u <= v first matters: the crossing routes
    # associate their three addends differently per orientation, so without
    # it transposed entries could differ in the last bit.
    A = path.A
    i, j = e.i, e.j
    lo = np.minimum(uu, vv)
    hi = np.maximum(uu, vv)
    direct = np.abs(A[hi] - A[lo])
    if i == j:
        return direct
    d = path.dist(i, j)
    r2 = (np.abs(A[i] - A[lo]) + d) + np.abs(A[hi] - A[j])
    r3 = (np.abs(A[j] - A[lo]) + d) + np.abs(A[hi] - A[i])
    return np.minimum(direct, np.minimum(r2, r3))


def brute_profile(path: MetricPath, e: CandidateEdge) -> DiagnosticProfile:
    """All four diameter components of the graph augmented with e, by scan."""
    i, j = path._check_edge(e)
    n = path.n
    ks = np.arange(i, j + 1, dtype=np.int64)
    ones = np.ones_like(ks)
    alpha = float(_pair_dist_grid(path, e, ones, ks).max())
    beta = float(_pair_dist_grid(path, e, ks, ones * n).max())
    kk, ll = np.meshgrid(ks, ks, indexing="ij")
    gamma = float(_pair_dist_grid(path, e, kk.ravel(), ll.ravel()).max())
    delta = brute_pair_distance(path, e, 1, n)
    return DiagnosticProfile.from_parts(alpha, beta, gamma, delta)


def brute_diameter(path: MetricPath, e: CandidateEdge) -> float:
    """Diameter of the augmented graph as a max over every vertex pair."""
    path._check_edge(e)
    n = path.n
    ks = np.arange(1, n + 1, dtype=np.int64)
    uu, vv = np.meshgrid(ks, ks, indexing="ij")
    return float(_pair_dist_grid(path, e, uu.ravel(), vv.ravel()).max())


def brute_solve(path: MetricPath, cap: int | None = None) -> tuple[float, CandidateEdge]:
    """Exact optimum by trying every edge; lexicographically first witness.

    Returns (best diameter, edge).  The edge (i, i) stands for "add
    nothing"; it wins only when no shortcut improves the path diameter.
    """
    limit = resolve_oracle_cap(cap)
    n = path.n
    if n > limit:
        raise ValueError(
            f"instance has n={n}, above the brute-force cap of {limit}; "
            "raise DOAP_ORACLE_CAP or pass cap= to override")
    ks = np.arange(1, n + 1, dtype=np.int64)
    uu, vv = np.meshgrid(ks, ks, indexing="ij")
    uu = uu.ravel()
    vv = vv.ravel()
    best = None
    best_edge = None
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            e = CandidateEdge(i, j)
            diam = float(_pair_dist_grid(path, e, uu, vv).max())
            if best is None or diam < best:
                best = diam
                best_edge = e
    return best, best_edge
