"""Command-line front end: generate, decide, solve, oracle, verify, bench.

Exit protocol: 0 success (for `decide`: feasible), 1 infeasible, 2 any
error (bad flags, unreadable file, malformed instance).  With --json each
command prints exactly one JSON object to stdout; human mode prints plain
lines (and CSV rows for verify/bench).  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from statistics import median

from .decision import decide
from .instances import KINDS, GeneratorSpec, generate, read_instance, write_instance
from .metric_core import MetricPath
from .optimize import solve
from .oracle import brute_profile, brute_solve

VERIFY_TOLERANCE = 1e-9


def _digest(path: MetricPath) -> dict:
    return {"n": path.n, "kind": "matrix" if path._use_matrix else "points"}


def _report(command: str, path: MetricPath | None, result: dict,
            stats: dict | None, wall: float) -> dict:
    return {
        "command": command,
        "instance": _digest(path) if path is not None else None,
        "result": result,
        "stats": stats,
        "wall_time_s": wall,
    }


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _parse_params(raw: list[str]) -> dict[str, float]:
    params = {}
    for item in raw:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--param expects key=value, got {item!r}")
        params[key] = float(value)
    return params


def cmd_gen(args) -> int:
    spec = GeneratorSpec(kind=args.kind, n=args.n, dim=args.dim, seed=args.seed,
                         params=_parse_params(args.param))
    t0 = time.perf_counter()
    path = generate(spec)
    write_instance(path, args.output)
    wall = time.perf_counter() - t0
    report = _report("gen", path, {"output": args.output, "seed": args.seed,
                                   "generator": args.kind}, None, wall)
    _emit(args, report, [f"wrote {args.output}: {args.kind} n={path.n}"])
    return 0


def cmd_decide(args) -> int:
    path = read_instance(args.instance)
    t0 = time.perf_counter()
    outcome = decide(path, args.lam)
    wall = time.perf_counter() - t0
    witness = [outcome.witness.i, outcome.witness.j] if outcome.witness else None
    report = _report("decide", path,
                     {"lambda": args.lam, "feasible": outcome.feasible,
                      "witness": witness},
                     {"ops": outcome.ops}, wall)
    verdict = "feasible" if outcome.feasible else "infeasible"
    lines = [f"lambda={args.lam:.12g}: {verdict}"]
    if witness:
        lines.append(f"witness edge: ({witness[0]}, {witness[1]})")
    _emit(args, report, lines)
    return 0 if outcome.feasible else 1


def cmd_solve(args) -> int:
    path = read_instance(args.instance)
    result = solve(path)
    stats = {"decision_calls": result.stats.decision_calls,
             "matrix_evaluations": result.stats.matrix_evaluations,
             "elapsed_s": result.stats.elapsed,
             "stages": result.stats.stages}
    payload = {"lambda_star": result.lambda_star,
               "edge": [result.edge.i, result.edge.j],
               "lambda_alpha": result.lambda_alpha,
               "lambda_beta": result.lambda_beta,
               "lambda_delta": result.lambda_delta,
               "lambda_1": result.lambda_1,
               "lambda_p": result.lambda_p,
               "lambda_prime": result.lambda_prime}
    report = _report("solve", path, payload, stats, result.stats.elapsed)
    _emit(args, report, [
        f"lambda_star = {result.lambda_star:.12g}",
        f"edge = ({result.edge.i}, {result.edge.j})",
        f"decision calls = {result.stats.decision_calls}, "
        f"matrix evaluations = {result.stats.matrix_evaluations}",
    ])
    return 0


def cmd_oracle(args) -> int:
    path = read_instance(args.instance)
    t0 = time.perf_counter()
    lam, edge = brute_solve(path, cap=args.cap)
    wall = time.perf_counter() - t0
    report = _report("oracle", path,
                     {"lambda_star": lam, "edge": [edge.i, edge.j]}, None, wall)
    _emit(args, report, [f"lambda_star = {lam:.12g}",
                         f"edge = ({edge.i}, {edge.j})"])
    return 0


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    rows = []
    all_ok = True
    for trial in range(args.trials):
        kind = KINDS[trial % len(KINDS)]
        n = 2 + (args.seed + 7 * trial) % max(args.n_max - 1, 1)
        spec = GeneratorSpec(kind=kind, n=n, seed=args.seed + trial)
        path = generate(spec)
        res = solve(path)
        want, _ = brute_solve(path)
        tol = VERIFY_TOLERANCE * max(1.0, want)
        ok = (abs(res.lambda_star - want) <= tol
              and brute_profile(path, res.edge).diameter <= res.lambda_star + tol)
        all_ok = all_ok and ok
        rows.append({"trial": trial, "kind": kind, "n": n, "seed": spec.seed,
                     "lambda_solve": res.lambda_star, "lambda_oracle": want,
                     "agree": ok})
    wall = time.perf_counter() - t0
    report = _report("verify", None,
                     {"trials": args.trials, "all_agree": all_ok, "rows": rows},
                     None, wall)
    lines = ["trial,kind,n,seed,lambda_solve,lambda_oracle,agree"]
    lines += [f"{r['trial']},{r['kind']},{r['n']},{r['seed']},"
              f"{r['lambda_solve']!r},{r['lambda_oracle']!r},{int(r['agree'])}"
              for r in rows]
    _emit(args, report, lines)
    if not all_ok:
        print("verification FAILED", file=sys.stderr)
    return 0 if all_ok else 1


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError(f"--sizes must be positive integers, got {args.sizes!r}")
    # First solve pays the kernel compilation cost; keep it out of the rows.
    solve(generate(GeneratorSpec(kind="euclidean_uniform", n=64, seed=0)))
    t0 = time.perf_counter()
    rows = []
    for size in sizes:
        times, calls, evals = [], [], []
        for rep in range(args.reps):
            path = generate(GeneratorSpec(kind="euclidean_uniform", n=size,
                                          seed=args.seed + rep))
            res = solve(path)
            times.append(res.stats.elapsed * 1e3)
            calls.append(res.stats.decision_calls)
            evals.append(res.stats.matrix_evaluations)
        rows.append({"size": size, "time_ms": median(times),
                     "decision_calls": int(median(calls)),
                     "evals": int(median(evals))})
    wall = time.perf_counter() - t0
    report = _report("bench", None, {"rows": rows, "reps": args.reps}, None, wall)
    lines = ["size,time_ms,decision_calls,evals"]
    lines += [f"{r['size']},{r['time_ms']:.3f},{r['decision_calls']},{r['evals']}"
              for r in rows]
    _emit(args, report, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doap",
        description="Shortest added edge minimizing the diameter of a metric path graph.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="generator-specific parameter (repeatable)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("decide", help="test one threshold against an instance")
    p.add_argument("instance")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="threshold to test")
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("solve", help="optimal threshold and witness edge")
    p.add_argument("instance")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force reference answer (small n)")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=None,
                   help="override the size guard (env: DOAP_ORACLE_CAP)")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify", help="random corpus: solver vs oracle")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="wall time and counters per size")
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_bench)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true",
                        help="one JSON report object on stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
