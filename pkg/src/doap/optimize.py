"""End-to-end search for the best shortcut edge.

The optimum lambda_star is the smallest threshold the decision procedure
accepts.  Rather than searching over thresholds blindly, the candidate
values are organized into a small family of sorted structures, each
searched with the generic sorted-matrix machinery and the decision
procedure as the (expensive, monotone) predicate:

1. lambda_alpha, lambda_beta, lambda_delta: smallest feasible entry of the
   alpha / beta / delta value matrices.  Their minimum, lambda_1, already
   equals lambda_star whenever some optimal edge is governed by one of
   those three quantities.
2. Otherwise the binding constraint is a cycle quantity, and lambda_star
   is either a subpath length (lambda_p, searched over the d_P matrix) or
   a cycle length minus a best boundary saving (lambda_prime, a set of at
   most n explicitly computed values d1_max[i]).

The returned value is always one that the decision procedure approved
during the search, so the closing decide(lambda_star) call deterministically
re-accepts it and yields the witness edge.

Decision-call budget, asserted by tests: each matrix stage spends at most
PRED_LOG_FACTOR * ceil(log2 n) + PRED_BASE calls, the set stage at most
ceil(log2 n) + 2, plus one closing call.  With L = ceil(log2 n) that
totals 4*(3L+12) + (L+2) + 1 = 13L + 51 <= 4*(DECISION_LOG_FACTOR * L +
DECISION_BASE); entry evaluations total at most MATRIX_EVAL_FACTOR * n
for n >= 32 (four searches at EVAL_LINEAR_FACTOR * n + EVAL_BASE each).

Floating point: the batch evaluators below re-derive the per-edge values
with exactly the operation order of the scalar ones in MetricPath, so a
value found by the matrix search re-evaluates to the same bits everywhere.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .decision import build_gamma_oracle, compute_index_profile, decide
from .matrix_search import (
    ASCENDING,
    DESCENDING,
    SortedMatrixView,
    min_feasible_in_matrix,
    min_feasible_in_set,
)
from .metric_core import CandidateEdge, MetricPath

DECISION_LOG_FACTOR = 4
DECISION_BASE = 13
MATRIX_EVAL_FACTOR = 100

NONE_INDEX = 0


@dataclass
class SolveStats:
    """Work counters for one solve run.

    stages maps a stage name (alpha, beta, delta, path, prime, final) to
    the number of decision-procedure calls it spent.
    """

    decision_calls: int = 0
    matrix_evaluations: int = 0
    elapsed: float = 0.0
    stages: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class CandidateTable:
    """Per-row candidates for the cycle-bound stage.

    a[i] is the smallest edge endpoint j that satisfies the three index
    constraints at threshold lambda_1 (NONE_INDEX when the intersection is
    empty); script_i lists the rows where a is defined; script_i_prime the
    subset whose cycle test is not already settled by the reach arrays;
    d1_max[t] is the threshold at which row script_i_prime[t]'s cycle
    constraint switches to feasible: cycle_length(i, a_i) minus the best
    boundary saving min_{j in [i, h'[a_i]-1]} d_P(j, g'_j + 1).
    """

    a: np.ndarray
    script_i: np.ndarray
    script_i_prime: np.ndarray
    d1_max: np.ndarray


@dataclass(frozen=True)
class SolveResult:
    """Optimal threshold, a witness edge, and per-stage diagnostics.

    lambda_p and lambda_prime are None when the pipeline stopped early
    (no row survived the index constraints at lambda_1).
    """

    lambda_star: float
    edge: CandidateEdge
    lambda_alpha: float
    lambda_beta: float
    lambda_delta: float
    lambda_1: float
    lambda_p: float | None
    lambda_prime: float | None
    stats: SolveStats


# -- batch evaluators, bit-identical to the MetricPath scalar ones ---------


def _alpha_batch(path: MetricPath, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    A = path.A
    d = path._dist_batch(ii, jj)
    base = (A[ii] - A[1]) + d
    lo = np.array(ii, dtype=np.int64)
    hi = np.array(jj, dtype=np.int64)
    while True:
        active = lo < hi
        if not np.any(active):
            break
        mid = (lo + hi + 1) // 2
        take = (A[mid] - A[1]) <= base + (A[jj] - A[mid])
        go = active & take
        back = active & ~take
        lo[go] = mid[go]
        hi[back] = mid[back] - 1
    best = np.minimum(A[lo] - A[1], base + (A[jj] - A[lo]))
    k2 = np.minimum(lo + 1, jj)
    alt = np.minimum(A[k2] - A[1], base + (A[jj] - A[k2]))
    return np.maximum(best, alt)


def _beta_batch(path: MetricPath, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    A = path.A
    n = path.n
    d = path._dist_batch(ii, jj)
    suffix = A[n] - A[jj]
    lo = np.array(ii, dtype=np.int64)
    hi = np.array(jj, dtype=np.int64)
    while True:
        active = lo < hi
        if not np.any(active):
            break
        mid = (lo + hi + 1) // 2
        take = ((A[mid] - A[ii]) + d) + suffix <= (A[n] - A[mid])
        go = active & take
        back = active & ~take
        lo[go] = mid[go]
        hi[back] = mid[back] - 1
    best = np.minimum(A[n] - A[lo], ((A[lo] - A[ii]) + d) + suffix)
    k2 = np.minimum(lo + 1, jj)
    alt = np.minimum(A[n] - A[k2], ((A[k2] - A[ii]) + d) + suffix)
    return np.maximum(best, alt)


def _delta_batch(path: MetricPath, ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
    A = path.A
    n = path.n
    total = float(A[n] - A[1])
    d = path._dist_batch(ii, jj)
    out = np.minimum(total, ((A[ii] - A[1]) + d) + (A[n] - A[jj]))
    out[ii == jj] = total
    return out


# -- sorted matrix views (padded below the diagonal) ------------------------


def _view(path: MetricPath, batch_fn, pad_fn, row_order: str, col_order: str) -> SortedMatrixView:
    def evb(ii, jj):
        ii = np.asarray(ii, dtype=np.int64)
        jj = np.asarray(jj, dtype=np.int64)
        out = np.empty(ii.shape, dtype=np.float64)
        pad = jj < ii
        if np.any(pad):
            out[pad] = pad_fn(ii[pad], jj[pad])
        real = ~pad
        if np.any(real):
            out[real] = batch_fn(path, ii[real], jj[real])
        return out

    def ev(i, j):
        return float(evb(np.array([i], dtype=np.int64), np.array([j], dtype=np.int64))[0])

    return SortedMatrixView(path.n, ev, row_order, col_order, eval_batch=evb)


def alpha_view(path: MetricPath) -> SortedMatrixView:
    # Pad j < i with alpha(j, j) = d_P(1, j): rows and columns both ascend.
    A = path.A
    return _view(path, _alpha_batch, lambda ii, jj: A[jj] - A[1],
                 ASCENDING, ASCENDING)


def beta_view(path: MetricPath) -> SortedMatrixView:
    # Pad j < i with beta(i, i) = d_P(i, n): rows and columns both descend.
    A, n = path.A, path.n
    return _view(path, _beta_batch, lambda ii, jj: A[n] - A[ii],
                 DESCENDING, DESCENDING)


def delta_view(path: MetricPath) -> SortedMatrixView:
    # Pad j < i with delta(j, j) = d_P(1, n): descending along rows (j up
    # means a shorter tail), ascending down columns (i up means a longer
    # lead-in), so the searcher flips the column index internally.
    A, n = path.A, path.n
    total = float(A[n] - A[1])
    return _view(path, _delta_batch, lambda ii, jj: np.full(ii.shape, total),
                 DESCENDING, ASCENDING)


def path_dist_view(path: MetricPath) -> SortedMatrixView:
    # Subpath lengths d_P(i, j), padded with 0 below the diagonal.
    A = path.A

    def batch(p, ii, jj):
        return A[jj] - A[ii]

    return _view(path, batch, lambda ii, jj: np.zeros(ii.shape),
                 ASCENDING, DESCENDING)


_VIEWS: dict[str, Callable[[MetricPath], SortedMatrixView]] = {
    "alpha": alpha_view,
    "beta": beta_view,
    "delta": delta_view,
}


def lambda_f(path: MetricPath, f: str) -> float:
    """Smallest feasible alpha / beta / delta value; O(n log n)."""
    if f not in _VIEWS:
        raise ValueError(f"f must be one of {sorted(_VIEWS)}, got {f!r}")
    value, _ = min_feasible_in_matrix(_VIEWS[f](path),
                                      lambda v: decide(path, v).feasible)
    # The matrix always contains the plain-path diameter, which is feasible.
    assert value is not None
    return value


def build_candidate_table(path: MetricPath, lam1: float, lam_p: float) -> CandidateTable:
    """Rows whose binding constraint is the cycle bound, with thresholds.

    Uses strict comparisons at both lam1 (index profile) and lam_p (reach
    arrays): a row matters only if it is infeasible below those values.
    Requires lam1 > 0.  O(n log n), dominated by the range-minimum build.
    """
    if not lam1 > 0.0:
        raise ValueError(f"lam1 must be positive, got {lam1}")
    n = path.n
    prof = compute_index_profile(path, lam1, strict=True)
    rows = np.arange(1, n + 1, dtype=np.int64)
    a_row = np.maximum(prof.i_beta[1:], prof.i_delta[1:])
    defined = a_row <= prof.i_alpha[1:]
    a = np.zeros(n + 1, dtype=np.int64)
    a[1:][defined] = a_row[defined]
    script_i = rows[defined]
    if script_i.size == 0:
        empty_i = np.empty(0, dtype=np.int64)
        return CandidateTable(a=a, script_i=script_i, script_i_prime=empty_i,
                              d1_max=np.empty(0, dtype=np.float64))

    # Rows with a[i] == i (possible when lam1 exceeds the plain-path
    # diameter) carry no cycle constraint; h'[a] <= a excludes them from
    # script_i_prime below, so only rows with i < a[i] reach the range
    # minimum and its [i, h'[a]-1] window is always nonempty.
    oracle = build_gamma_oracle(path, lam_p, strict=True)
    aa = a[script_i]
    keep = script_i <= oracle.h[aa] - 1
    script_i_prime = script_i[keep]
    if script_i_prime.size == 0:
        return CandidateTable(a=a, script_i=script_i, script_i_prime=script_i_prime,
                              d1_max=np.empty(0, dtype=np.float64))
    aa = aa[keep]
    cyc = (path.A[aa] - path.A[script_i_prime]) + path._dist_batch(script_i_prime, aa)
    min_b = oracle.rmq.min_batch(script_i_prime, oracle.h[aa] - 1)
    return CandidateTable(a=a, script_i=script_i, script_i_prime=script_i_prime,
                          d1_max=cyc - min_b)


def _staged_predicate(path: MetricPath, stats: SolveStats, stage: str):
    def pred(v: float) -> bool:
        stats.decision_calls += 1
        stats.stages[stage] = stats.stages.get(stage, 0) + 1
        return decide(path, v).feasible

    return pred


def solve(path: MetricPath) -> SolveResult:
    """Optimal threshold and witness edge; O(n log n) total."""
    t0 = time.perf_counter()
    stats = SolveStats()

    lams = {}
    for name, make in _VIEWS.items():
        lams[name], search = min_feasible_in_matrix(
            make(path), _staged_predicate(path, stats, name))
        assert lams[name] is not None
        stats.matrix_evaluations += search.evaluations
    lam1 = min(lams.values())

    lam_p: float | None = None
    lam_prime: float | None = None
    lam_star = lam1
    if lam1 > 0.0:
        prof = compute_index_profile(path, lam1, strict=True)
        survivors = np.any(
            np.maximum(prof.i_beta[1:], prof.i_delta[1:]) <= prof.i_alpha[1:])
        if survivors:
            lam_p, search = min_feasible_in_matrix(
                path_dist_view(path), _staged_predicate(path, stats, "path"))
            assert lam_p is not None  # d_P(1, n) is always feasible
            stats.matrix_evaluations += search.evaluations
            table = build_candidate_table(path, lam1, lam_p)
            base_pred = _staged_predicate(path, stats, "prime")
            lam_prime = min_feasible_in_set(
                table.d1_max, lambda v: v >= 0.0 and base_pred(v))
            lam_star = min(lam1, lam_p,
                           lam_prime if lam_prime is not None else np.inf)

    stats.decision_calls += 1
    stats.stages["final"] = 1
    outcome = decide(path, lam_star)
    if not outcome.feasible or outcome.witness is None:
        raise RuntimeError(f"internal error: {lam_star} not re-accepted")
    stats.elapsed = time.perf_counter() - t0
    return SolveResult(lambda_star=lam_star, edge=outcome.witness,
                       lambda_alpha=lams["alpha"], lambda_beta=lams["beta"],
                       lambda_delta=lams["delta"], lambda_1=lam1,
                       lambda_p=lam_p, lambda_prime=lam_prime, stats=stats)
