"""Smallest feasible value in a sorted matrix, and in a plain set.

The matrix is implicit: an n x n grid of reals, every row monotone one way
and every column monotone one way, with entries computed on demand.  The
predicate is monotone over values (false below some unknown threshold,
true from there on) and expensive, so the search spends evaluations freely
but rations predicate calls.

Strategy: keep a set of disjoint square blocks that might still contain
the answer, halve their side each round, and prune on two fronts.  Value
bounds (lo infeasible, hi feasible) discard blocks whose corner values put
them entirely outside (lo, hi); two median probes per round (over the
blocks' small corners, then their large corners) tighten those bounds.
Once blocks are single cells, a binary search over the surviving values
finishes the job.

Budgets, asserted by tests: at most PRED_LOG_FACTOR * ceil(log2 n) +
PRED_BASE predicate calls (2 per halving round, plus the final binary
search over O(n) surviving values) and at most EVAL_LINEAR_FACTOR * n +
EVAL_BASE entry evaluations per search.  The evaluation bound reflects the
classical behavior of this pruning scheme: blocks that survive at side s
straddle the (lo, hi) value band, and the probes keep that band too narrow
for more than O(n/s) disjoint blocks to straddle it.

The returned value is always an entry the predicate approved directly
during this search; callers may rely on that (re-running the predicate on
the result cannot disagree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ASCENDING = "ascending"
DESCENDING = "descending"

PRED_LOG_FACTOR = 3
PRED_BASE = 12
EVAL_LINEAR_FACTOR = 24
EVAL_BASE = 32


@dataclass
class SearchStats:
    predicate_calls: int = 0
    evaluations: int = 0


class SortedMatrixView:
    """An implicit n x n matrix with monotone rows and columns.

    eval_fn(i, j) returns entry (i, j), 1-based.  row_order says how values
    run within a row left to right (j increasing); col_order within a
    column top to bottom (i increasing).  eval_batch, when given, must
    return exactly the same floats as eval_fn, elementwise over index
    arrays; the searcher uses it to evaluate corner batches.
    """

    def __init__(self, n: int, eval_fn: Callable[[int, int], float],
                 row_order: str, col_order: str,
                 eval_batch: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if row_order not in (ASCENDING, DESCENDING) or col_order not in (ASCENDING, DESCENDING):
            raise ValueError("row_order and col_order must be 'ascending' or 'descending'")
        self.n = n
        self._eval = eval_fn
        self.row_order = row_order
        self.col_order = col_order
        self._eval_batch = eval_batch

    def value(self, i: int, j: int) -> float:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValueError(f"indices out of range: ({i}, {j})")
        return float(self._eval(i, j))

    def value_batch(self, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
        if self._eval_batch is not None:
            return np.asarray(self._eval_batch(ii, jj), dtype=np.float64)
        return np.array([self._eval(int(i), int(j)) for i, j in zip(ii, jj)], dtype=np.float64)


def min_feasible_in_matrix(view: SortedMatrixView,
                           predicate: Callable[[float], bool]) -> tuple[float | None, SearchStats]:
    """Smallest entry the monotone predicate accepts; None if it never does."""
    n = view.n
    stats = SearchStats()

    # Normalized coordinates (r, c), 0-based, ascending along both axes;
    # cells beyond the real matrix read as +inf.  A descending column order
    # flips the row index, a descending row order flips the column index.
    row_desc = view.col_order == DESCENDING
    col_desc = view.row_order == DESCENDING

    def eval_cells(rr: np.ndarray, cc: np.ndarray) -> np.ndarray:
        out = np.full(rr.shape, np.inf)
        inside = (rr < n) & (cc < n)
        if np.any(inside):
            ii = (n - rr[inside]) if row_desc else (rr[inside] + 1)
            jj = (n - cc[inside]) if col_desc else (cc[inside] + 1)
            out[inside] = view.value_batch(ii, jj)
            stats.evaluations += int(np.count_nonzero(inside))
        return out

    size = 1
    while size < n:
        size <<= 1
    br = np.zeros(1, dtype=np.int64)
    bc = np.zeros(1, dtype=np.int64)
    lo = -np.inf  # known infeasible (vacuously at start)
    hi = np.inf   # known feasible matrix value once finite

    def probe(mu: float) -> None:
        nonlocal lo, hi
        stats.predicate_calls += 1
        if predicate(mu):
            hi = mu
        else:
            lo = mu

    while size > 1:
        half = size >> 1
        cr = (br[:, None] + np.array([0, 0, half, half])).ravel()
        cc = (bc[:, None] + np.array([0, half, 0, half])).ravel()
        vmin = eval_cells(cr, cc)
        vmax = vmin if half == 1 else eval_cells(cr + half - 1, cc + half - 1)
        for source in (vmin, vmax):
            keep = (vmin < hi) & (vmax > lo)
            cand = source[keep & (source > lo) & (source < hi) & np.isfinite(source)]
            if cand.size:
                k = (cand.size - 1) // 2
                probe(float(np.partition(cand, k)[k]))
        keep = (vmin < hi) & (vmax > lo)
        br, bc, size = cr[keep], cc[keep], half

    vals = eval_cells(br, bc)
    vals = np.unique(vals[(vals > lo) & (vals < hi) & np.isfinite(vals)])
    best = None
    lo_i, hi_i = 0, int(vals.size)
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        stats.predicate_calls += 1
        if predicate(float(vals[mid])):
            hi_i = mid
        else:
            lo_i = mid + 1
    if lo_i < vals.size:
        best = float(vals[lo_i])
    if np.isfinite(hi):
        best = float(hi) if best is None else min(best, float(hi))
    return best, stats


def min_feasible_in_set(values, predicate: Callable[[float], bool]) -> float | None:
    """Smallest value in `values` the monotone predicate accepts; None if none.

    Sorts once, then binary-searches with O(log k) predicate calls.
    """
    arr = np.unique(np.asarray(values, dtype=np.float64))
    if arr.size and np.isnan(arr[-1]):
        raise ValueError("values must not contain NaN")
    lo_i, hi_i = 0, int(arr.size)
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if predicate(float(arr[mid])):
            hi_i = mid
        else:
            lo_i = mid + 1
    if lo_i < arr.size:
        return float(arr[lo_i])
    return None
