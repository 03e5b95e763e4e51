"""Path instances embedded in a metric space, and the per-edge evaluators.

A path instance is a sequence of vertices v_1 .. v_n together with a metric
distance between every vertex pair, given either as points in Euclidean
space or as an explicit symmetric matrix.  Adding one shortcut edge (i, j)
turns the path into a graph whose diameter decomposes into four quantities,
each a farthest-distance restricted to a structured set of vertex pairs:

* alpha -- farthest graph distance from v_1 to any vertex in [i, j],
* beta  -- farthest graph distance from any vertex in [i, j] to v_n,
* gamma -- farthest graph distance between two vertices both in [i, j],
* delta -- graph distance from v_1 to v_n.

This module holds the instance type and the O(1)/O(log n) evaluators for
alpha, beta, delta and the cycle quantities.  gamma has no closed form and
is handled by the decision machinery; a brute-force recomputation of all
four lives in the oracle module.

All vertex indices in the public interface are 1-based.  Arrays stored on
the instance are padded with an unused slot 0 so code can index them with
vertex numbers directly.

Floating point note: expressions that combine prefix sums and one metric
distance are always grouped the same way everywhere in this package
(prefix part, plus distance, plus suffix part).  Several comparisons rely
on re-computed values matching bit for bit, so do not "simplify" the
arithmetic in one place only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Shared dummy for the unused source array in each mode; kernels receive
# both arrays and a flag.
_DUMMY = np.zeros((1, 1), dtype=np.float64)


@dataclass(frozen=True)
class CandidateEdge:
    """A shortcut edge between vertices i and j, i <= j (i == j means: no edge)."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if not (isinstance(self.i, int) and isinstance(self.j, int)):
            raise ValueError("edge endpoints must be integers")
        if self.i < 1 or self.j < self.i:
            raise ValueError(f"edge endpoints must satisfy 1 <= i <= j, got ({self.i}, {self.j})")


@dataclass(frozen=True)
class DiagnosticProfile:
    """The four diameter components of one augmented graph, plus the maxima.

    eta is max(alpha, beta, delta); diameter is max(gamma, eta).
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    eta: float
    diameter: float

    @classmethod
    def from_parts(cls, alpha: float, beta: float, gamma: float, delta: float) -> "DiagnosticProfile":
        eta = max(alpha, beta, delta)
        return cls(alpha=alpha, beta=beta, gamma=gamma, delta=delta,
                   eta=eta, diameter=max(gamma, eta))


class MetricPath:
    """An n-vertex path embedded in a metric space.

    Construct with exactly one of `points` (list of equal-length coordinate
    rows) or `matrix` (n x n symmetric, zero diagonal, nonnegative).  The
    triangle inequality is assumed; pass validate_triangle=True to check it
    on matrix input (O(n^3), intended for tests and untrusted files).

    Instances are immutable after construction and safe to share across
    threads; every method is a pure query.
    """

    def __init__(self, *, points=None, matrix=None, validate_triangle: bool = False):
        if (points is None) == (matrix is None):
            raise ValueError("exactly one of points= or matrix= is required")
        if points is not None:
            pts = np.asarray(points, dtype=np.float64)
            if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
                raise ValueError("points must be a non-empty list of non-empty coordinate rows")
            if not np.all(np.isfinite(pts)):
                raise ValueError("points must be finite")
            n = pts.shape[0]
            padded = np.zeros((n + 1, pts.shape[1]), dtype=np.float64)
            padded[1:] = pts
            self._pts = padded
            self._mat = _DUMMY
            self._use_matrix = False
            self.dim: int | None = int(pts.shape[1])
        else:
            mat = np.asarray(matrix, dtype=np.float64)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
                raise ValueError("matrix must be square and non-empty")
            if not np.all(np.isfinite(mat)):
                raise ValueError("matrix entries must be finite")
            if np.any(mat < 0.0):
                raise ValueError("matrix entries must be nonnegative")
            if np.any(np.diagonal(mat) != 0.0):
                raise ValueError("matrix diagonal must be exactly zero")
            if not np.array_equal(mat, mat.T):
                raise ValueError("matrix must be symmetric")
            n = mat.shape[0]
            padded = np.zeros((n + 1, n + 1), dtype=np.float64)
            padded[1:, 1:] = mat
            self._mat = padded
            self._pts = _DUMMY
            self._use_matrix = True
            self.dim = None
            if validate_triangle:
                self._check_triangle(mat)

        self.n: int = n
        # Prefix sums of consecutive-vertex distances: A[1] = 0,
        # A[k] = A[k-1] + |v_{k-1} v_k|.  Slot 0 is unused padding.
        A = np.zeros(n + 1, dtype=np.float64)
        if n > 1:
            ii = np.arange(1, n, dtype=np.int64)
            A[2:] = np.cumsum(self._dist_batch(ii, ii + 1))
        self.A = A
        self.A.setflags(write=False)

    @staticmethod
    def _check_triangle(mat: np.ndarray) -> None:
        # Allow a uniform few-ulp violation: matrices produced by shortest
        # path closure or by measured distances are metric up to rounding.
        n = mat.shape[0]
        tol = 16.0 * np.finfo(np.float64).eps * max(1.0, float(mat.max()))
        for k in range(n):
            through_k = mat[:, k, None] + mat[None, k, :]
            bad = mat > through_k + tol
            if np.any(bad):
                u, v = np.argwhere(bad)[0]
                raise ValueError(
                    f"triangle inequality violated: d({u+1},{v+1}) > d({u+1},{k+1}) + d({k+1},{v+1})")

    # -- raw distances ----------------------------------------------------

    def dist(self, u: int, v: int) -> float:
        """Metric distance between vertices u and v (symmetric)."""
        self._check_vertex(u)
        self._check_vertex(v)
        if self._use_matrix:
            return float(self._mat[u, v])
        acc = 0.0
        pu = self._pts[u]
        pv = self._pts[v]
        for t in range(pu.shape[0]):
            dd = float(pu[t]) - float(pv[t])
            acc += dd * dd
        return math.sqrt(acc)

    def path_dist(self, i: int, j: int) -> float:
        """Distance from v_i to v_j along the path; requires i <= j."""
        self._check_vertex(i)
        self._check_vertex(j)
        if i > j:
            raise ValueError(f"path_dist requires i <= j, got ({i}, {j})")
        return float(self.A[j] - self.A[i])

    def _dist_batch(self, uu: np.ndarray, vv: np.ndarray) -> np.ndarray:
        # 1-based index arrays; same accumulation order as dist() so the
        # two produce identical floats.
        if self._use_matrix:
            return self._mat[uu, vv]
        du = self._pts[uu]
        dv = self._pts[vv]
        diff = du - dv
        acc = diff[:, 0] * diff[:, 0]
        for t in range(1, diff.shape[1]):
            acc = acc + diff[:, t] * diff[:, t]
        return np.sqrt(acc)

    # -- per-edge evaluators ----------------------------------------------

    def delta(self, e: CandidateEdge) -> float:
        """Graph distance from v_1 to v_n after adding e; O(1)."""
        i, j = self._check_edge(e)
        total = self.path_dist(1, self.n)
        if i == j:
            return total
        return min(total, (self.path_dist(1, i) + self.dist(i, j)) + self.path_dist(j, self.n))

    def alpha(self, e: CandidateEdge) -> float:
        """Farthest graph distance from v_1 to a vertex of [i, j]; O(log n).

        The graph distance from v_1 to v_k, k in [i, j], is the smaller of
        the pure path route and the route through the shortcut; the first
        grows with k and the second shrinks, so their minimum is unimodal.
        Binary search finds the largest k still on the growing branch; the
        maximum sits there or one step to the right.
        """
        i, j = self._check_edge(e)
        d = self.dist(i, j)
        base = self.path_dist(1, i) + d
        lo, hi = i, j
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.path_dist(1, mid) <= base + self.path_dist(mid, j):
                lo = mid
            else:
                hi = mid - 1
        best = min(self.path_dist(1, lo), base + self.path_dist(lo, j))
        if lo < j:
            k2 = lo + 1
            best = max(best, min(self.path_dist(1, k2), base + self.path_dist(k2, j)))
        return best

    def beta(self, e: CandidateEdge) -> float:
        """Farthest graph distance from a vertex of [i, j] to v_n; O(log n).

        Mirror image of alpha: route to v_n either stays on the path or
        goes back to v_i, across the shortcut, and on from v_j.
        """
        i, j = self._check_edge(e)
        d = self.dist(i, j)
        suffix = self.path_dist(j, self.n)
        lo, hi = i, j
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if (self.path_dist(i, mid) + d) + suffix <= self.path_dist(mid, self.n):
                lo = mid
            else:
                hi = mid - 1
        best = min(self.path_dist(lo, self.n), (self.path_dist(i, lo) + d) + suffix)
        if lo < j:
            k2 = lo + 1
            best = max(best, min(self.path_dist(k2, self.n), (self.path_dist(i, k2) + d) + suffix))
        return best

    def cycle_length(self, e: CandidateEdge) -> float:
        """Length of the cycle formed by the subpath i..j and the edge; O(1)."""
        i, j = self._check_edge(e)
        return self.path_dist(i, j) + self.dist(i, j)

    def cycle_detour(self, e: CandidateEdge, k: int, l: int) -> float:
        """Length of the cycle route from v_k to v_l that crosses the edge; O(1).

        Requires i <= k <= l <= j.  Runs from v_k back to v_i, across the
        shortcut to v_j, then back to v_l.
        """
        i, j = self._check_edge(e)
        if not (i <= k <= l <= j):
            raise ValueError(f"cycle_detour requires i <= k <= l <= j, got k={k}, l={l} for edge ({i}, {j})")
        return (self.path_dist(i, k) + self.dist(i, j)) + self.path_dist(l, j)

    # -- helpers ------------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not isinstance(v, (int, np.integer)):
            raise ValueError(f"vertex index must be an integer, got {v!r}")
        if v < 1 or v > self.n:
            raise ValueError(f"vertex index {v} out of range [1, {self.n}]")

    def _check_edge(self, e: CandidateEdge) -> tuple[int, int]:
        if e.j > self.n:
            raise ValueError(f"edge {e} out of range for n={self.n}")
        return e.i, e.j

    def __repr__(self) -> str:  # pragma: no cover
        src = "matrix" if self._use_matrix else f"points dim={self.dim}"
        return f"MetricPath(n={self.n}, {src})"
