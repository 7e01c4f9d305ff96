"""Command-line surface: single runs and benchmark sweeps.

Exit codes for ``run``: 0 success, 1 approximation-ratio violation (with
--oracle), 2 input/IO errors, 3 monitor failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .core import (
    CapacityError,
    EdgeStream,
    Matching,
    StreamFormatError,
    compute_params,
    parse_epsilon,
)
from .engine import run_stream
from .generators import GeneratorKind, GeneratorSpec, StreamOrder, generate
from .monitors import (
    MonitorFailure,
    TraceEvent,
    TRACE_MAX_EDGES,
    TRACE_MAX_NODES,
    check_eviction_gap,
    check_phi_growth,
    check_ratio_bound,
    check_terminal_weights,
)
from .reference import EXACT_MAX_NODES, Graph, exact_mwm, greedy_sorted, mwm_simple
from .report import RUN_CSV_HEADER, RunReport
from .streamio import read_stream

__all__ = ["main", "cmd_run", "cmd_bench"]

_GUARANTEE = {"simple": Fraction(2), "greedy": Fraction(2), "exact": Fraction(1)}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stream-mwm",
        description="Single-pass bounded-memory maximum weight matching",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one algorithm over one stream")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="edge-list file, or '-' for stdin")
    src.add_argument(
        "--gen", choices=[k.value for k in GeneratorKind], help="generate the stream"
    )
    _add_generator_flags(run)
    run.add_argument("--eps", default="1/2", help="epsilon as 'p/q' or decimal")
    run.add_argument(
        "--alg", choices=["semi", "simple", "greedy", "exact"], default="semi"
    )
    run.add_argument(
        "--oracle",
        action="store_true",
        help=f"compare against the exact solver (n <= {EXACT_MAX_NODES} only)",
    )
    run.add_argument(
        "--monitors",
        action="store_true",
        help="replay the runtime checks on a recorded trace (small instances)",
    )
    run.add_argument("--timing", action="store_true", help="collect per-edge timings")
    run.add_argument("--report", choices=["json", "csv"], default="json")
    run.add_argument("--out", default="-", help="report destination ('-' = stdout)")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="sweep generated streams, emit CSV rows")
    bench.add_argument(
        "--gen", choices=[k.value for k in GeneratorKind], default="er"
    )
    _add_generator_flags(bench)
    bench.add_argument("--ns", default="1000,10000,100000", help="comma-separated n sweep")
    bench.add_argument("--eps", default="1/2")
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument(
        "--degree",
        type=float,
        default=16.0,
        help="target average degree for er (sets p = degree/(n-1))",
    )
    bench.add_argument("--out", default="-")
    bench.set_defaults(func=cmd_bench)
    return parser


def _add_generator_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, help="node count for --gen")
    sub.add_argument("--p", type=float, help="edge probability (er)")
    sub.add_argument("--wmax", type=int, default=1000, help="max edge weight")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--base", type=float, default=1.9, help="growth base (chain)")
    sub.add_argument(
        "--order", choices=[o.value for o in StreamOrder], default="as-generated"
    )
    sub.add_argument("--order-seed", type=int, default=None)


def _spec_from_args(args: argparse.Namespace, n: int | None = None) -> GeneratorSpec:
    if n is None:
        if args.n is None:
            raise ValueError("--gen requires --n")
        n = args.n
    return GeneratorSpec(
        kind=GeneratorKind(args.gen),
        n=n,
        weight_max=args.wmax,
        seed=args.seed,
        p=args.p,
        base=args.base,
        order=StreamOrder(args.order),
        order_seed=args.order_seed,
    )


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fp:
            fp.write(text)


def _fail(message: str) -> int:
    print(f"stream-mwm: error: {message}", file=sys.stderr)
    return 2


def cmd_run(args: argparse.Namespace) -> int:
    try:
        if args.input is not None:
            stream = read_stream(args.input)
        else:
            stream = generate(_spec_from_args(args))
        eps = parse_epsilon(args.eps)
    except (OSError, StreamFormatError, CapacityError, ValueError) as exc:
        return _fail(str(exc))

    monitor_verdicts: dict[str, str] = {}
    try:
        if args.alg == "semi":
            matching, report = _run_semi(args, stream, eps, monitor_verdicts)
        else:
            matching, report = _run_reference(args, stream, eps)
    except (StreamFormatError, CapacityError, ValueError) as exc:
        return _fail(str(exc))

    violation = False
    if args.oracle and stream.n <= EXACT_MAX_NODES:
        oracle = exact_mwm(Graph.from_stream(stream))
        report.oracle_weight = oracle.total_weight
        if matching.total_weight == 0:
            report.ratio = 1.0 if oracle.total_weight == 0 else float("inf")
        else:
            report.ratio = oracle.total_weight / matching.total_weight
        bound = Fraction(report.ratio_bound)
        violation = (
            oracle.total_weight * bound.denominator
            > matching.total_weight * bound.numerator
        )

    text = (
        report.to_json()
        if args.report == "json"
        else _as_csv([RUN_CSV_HEADER, report.to_csv_row()])
    )
    try:
        _emit(args, text)
    except OSError as exc:
        return _fail(str(exc))

    if violation:
        print("stream-mwm: approximation ratio violated", file=sys.stderr)
        return 1
    if any(v == "fail" for v in monitor_verdicts.values()):
        print("stream-mwm: monitor failure", file=sys.stderr)
        return 3
    return 0


def _run_semi(
    args: argparse.Namespace,
    stream: EdgeStream,
    eps: Fraction,
    verdicts: dict[str, str],
) -> tuple[Matching, RunReport]:
    traceable = stream.n <= TRACE_MAX_NODES and len(stream.edges) <= TRACE_MAX_EDGES
    trace: list[TraceEvent] | None = None
    if args.monitors and traceable:
        trace = []
    matching, report = run_stream(
        stream, eps, trace_sink=trace, collect_timing=args.timing
    )
    if args.monitors:
        params = compute_params(stream.n, eps)
        if trace is not None:
            g = Graph.from_stream(stream)
            verdicts["phi_growth"] = _verdict(check_phi_growth(trace, params).ok)
            verdicts["eviction_gap"] = _verdict(check_eviction_gap(trace, params).ok)
            verdicts["terminal_weights"] = _verdict(
                check_terminal_weights(g, trace, params).ok
            )
        else:
            verdicts["phi_growth"] = "skipped"
            verdicts["eviction_gap"] = "skipped"
            verdicts["terminal_weights"] = "skipped"
        try:
            check_ratio_bound(params, report.heavy_edges_k or 0)
            verdicts["ratio_bound"] = "pass"
        except MonitorFailure:
            verdicts["ratio_bound"] = "fail"
        report.monitor_verdicts = dict(verdicts)
    return matching, report


def _run_reference(
    args: argparse.Namespace, stream: EdgeStream, eps: Fraction
) -> tuple[Matching, RunReport]:
    g = Graph.from_stream(stream)
    solver = {"simple": mwm_simple, "greedy": greedy_sorted, "exact": exact_mwm}[
        args.alg
    ]
    matching = solver(g)
    report = RunReport(
        algorithm=args.alg,
        n=stream.n,
        m=len(stream.edges),
        epsilon=str(eps),
        output_weight=matching.total_weight,
        ratio_bound=str(_GUARANTEE[args.alg]),
    )
    return matching, report


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _as_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


BENCH_CSV_HEADER = [
    "n",
    "m",
    "rep",
    "epsilon",
    "p50_ns",
    "p99_ns",
    "max_ns",
    "peak_live_entries",
    "queue_cap",
    "n_times_queue_cap",
    "max_queue_len",
    "heavy_edges_k",
    "evictions_total",
    "output_weight",
]


def _bench_task(task: tuple[GeneratorSpec, str, int]) -> list:
    spec, eps, rep = task
    stream = generate(spec)
    _, report = run_stream(stream, eps, collect_timing=True)
    t = report.per_edge_ns
    return [
        spec.n,
        report.m,
        rep,
        report.epsilon,
        t.p50 if t else "",
        t.p99 if t else "",
        t.max if t else "",
        report.peak_live_entries,
        report.queue_cap,
        spec.n * (report.queue_cap or 0),
        report.max_queue_len,
        report.heavy_edges_k,
        report.evictions_total,
        report.output_weight,
    ]


def _worker_count(tasks: int) -> int:
    env = os.environ.get("STREAM_MWM_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(tasks, os.cpu_count() or 1))


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        ns = [int(part) for part in args.ns.split(",") if part]
        eps = parse_epsilon(args.eps)
        tasks = []
        for n in ns:
            spec = _spec_from_args(args, n=n)
            if spec.kind is GeneratorKind.ERDOS_RENYI and args.p is None:
                spec = GeneratorSpec(
                    kind=spec.kind,
                    n=n,
                    weight_max=spec.weight_max,
                    seed=spec.seed,
                    p=min(1.0, args.degree / (n - 1)),
                    base=spec.base,
                    order=spec.order,
                    order_seed=spec.order_seed,
                )
            for rep in range(args.reps):
                tasks.append((spec, str(eps), rep))
    except (CapacityError, ValueError) as exc:
        return _fail(str(exc))

    workers = _worker_count(len(tasks))
    try:
        if workers == 1:
            rows = [_bench_task(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_bench_task, tasks))
    except (StreamFormatError, CapacityError, ValueError) as exc:
        return _fail(str(exc))

    rows.sort(key=lambda r: (r[0], r[2]))
    text = _as_csv([BENCH_CSV_HEADER] + [[str(c) for c in row] for row in rows])
    try:
        _emit(args, text)
    except OSError as exc:
        return _fail(str(exc))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
