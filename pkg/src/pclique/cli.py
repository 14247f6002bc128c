"""``pclique`` command line: solve, analyze, bench and generate.

Exit codes: 0 ok, 2 DIMACS parse error, 3 timeout, 4 bad arguments or missing input.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
from pathlib import Path

from .analysis import ANALYSIS_HEADER, IncompleteAnalysis, analyze_instance, balance_report
from .graph import DimacsError, Graph, degree_permute, random_graph, read_dimacs, to_dimacs
from .instances import generate
from .parallel import Sequential, parse_strategy, solve_parallel
from .search import max_clique

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_TIMEOUT = 3
EXIT_ARGS = 4

BENCH_HEADER = ["instance", "strategy", "workers", "run", "wall_ms", "total_nodes", "omega",
                "speedup", "min_thread_ms", "max_thread_ms", "status"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ARGS)


def _random_spec(text: str) -> tuple[int, float, int]:
    try:
        n, p, seed = text.split(",")
        return int(n), float(p), int(seed)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n,p,seed, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"worker counts must be >= 1: {text!r}")
    return values


def load_graph(source: str | None, random: tuple[int, float, int] | None = None) -> Graph:
    """A DIMACS path, a generatable family name (e.g. ``hamming6-2``) or a random spec."""
    if random is not None:
        n, p, seed = random
        try:
            return random_graph(n, p, seed)
        except ValueError as exc:
            raise UsageError(f"--random {n},{p},{seed}: {exc}") from None
    if source is None:
        raise UsageError("give an input file or --random n,p,seed")
    path = Path(source)
    if path.is_file():
        try:
            return read_dimacs(path)
        except DimacsError as exc:
            raise DimacsError(0, f"{path}: {exc}") from None
    try:
        return generate(source)
    except KeyError:
        raise UsageError(f"{source}: no such file and no known construction") from None


def _strategy(name: str, threads: int, seed: int):
    try:
        strategy = parse_strategy(name, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(strategy, Sequential) and threads != 1:
        raise UsageError(f"--split seq runs one thread, got --threads {threads}")
    if threads < 1:
        raise UsageError(f"--threads must be >= 1, got {threads}")
    return strategy


def _warm_up() -> None:
    """Load the compiled kernels so the first timed run does not pay for it."""
    max_clique(degree_permute(random_graph(8, 0.5, 0))[0])


def cmd_solve(args, out) -> int:
    g = load_graph(args.input, args.random)
    strategy = _strategy(args.split, args.threads, args.seed)
    _warm_up()
    pg, _ = degree_permute(g)
    inc, stats = solve_parallel(pg, args.threads, strategy, initial_bound=args.prime, timeout=args.timeout)
    if inc.empty and args.prime:
        print(f"omega<={args.prime} (no clique larger than {args.prime})", file=out)
    else:
        print(f"omega={inc.size} clique={','.join(map(str, inc.members))}", file=out)
    print(f"nodes={stats.total_nodes} wall_ms={1000 * stats.wall_time:.1f} strategy={strategy} "
          f"threads={args.threads} location={inc.found_at_label} "
          f"complete={'yes' if stats.complete else 'no'}", file=out)
    if args.threads > 1:
        if stats.producer_nodes:
            print(f"producer nodes={stats.producer_nodes} queue_high_water={stats.queue_high_water}", file=out)
        for t, (nodes, rt) in enumerate(zip(stats.nodes_per_thread, stats.per_thread_runtime)):
            print(f"thread {t} nodes={nodes} runtime_ms={1000 * rt:.1f}", file=out)
    return EXIT_OK if stats.complete else EXIT_TIMEOUT


def cmd_analyze(args, out) -> int:
    if args.random is None and not args.inputs:
        raise UsageError("give input files or --random n,p,seed")
    if not args.no_header:
        print(ANALYSIS_HEADER, file=out)
    status = EXIT_OK
    for src in args.inputs if args.random is None else [None]:
        g = load_graph(src, args.random)
        pg, _ = degree_permute(g)
        try:
            print(analyze_instance(pg, timeout=args.timeout).row(), file=out)
        except IncompleteAnalysis as exc:
            print(f"{g.name},,,,,timeout", file=out)
            print(f"timeout: {exc}", file=sys.stderr)
            status = EXIT_TIMEOUT
    return status


def _summary_row(instance, strategy, workers, rows, seq_wall) -> list:
    walls = [r[4] for r in rows]
    mean = statistics.fmean(walls)
    sd = statistics.stdev(walls) if len(walls) > 1 else 0.0
    nodes = [r[5] for r in rows]
    lo, hi = (min(walls) / mean, max(walls) / mean) if mean > 0 else (1.0, 1.0)
    speedups = [r[7] for r in rows]
    status = (f"summary: wall_sd={sd / mean if mean else 0:.3f} range=({lo:.2f}-{hi:.2f}) "
              f"speedup_sd={statistics.stdev(speedups) if len(speedups) > 1 else 0:.3f} "
              f"nodes_cv={statistics.pstdev(nodes) / statistics.fmean(nodes):.4f}")
    return [instance, strategy, workers, "mean", round(mean, 3), round(statistics.fmean(nodes), 1),
            rows[0][6], round(seq_wall / mean, 3) if mean else "",
            round(statistics.fmean(r[8] for r in rows), 3),
            round(statistics.fmean(r[9] for r in rows), 3), status]


PLOT_SCRIPT = '''"""Speedup against worker count, one line per (instance, strategy); reads {csv}."""
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

src = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
curves = defaultdict(list)
with open(src, newline="") as fh:
    for row in csv.DictReader(fh):
        if row["run"] == "mean" and row["speedup"]:
            curves[row["instance"], row["strategy"]].append((int(row["workers"]), float(row["speedup"])))
fig, ax = plt.subplots()
for (instance, strategy), pts in sorted(curves.items()):
    pts.sort()
    ax.plot([w for w, _ in pts], [s for _, s in pts], marker="o", label=f"{{instance}} {{strategy}}")
top = max((w for pts in curves.values() for w, _ in pts), default=1)
ax.plot([1, top], [1, top], "k:", label="linear")
ax.set_xlabel("worker threads")
ax.set_ylabel("speedup")
ax.legend(fontsize="small")
fig.savefig(src.rsplit(".", 1)[0] + "_speedup.png", dpi=150)
'''


def cmd_bench(args, out) -> int:
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for name in strategies:
        _strategy(name, 1, args.seed)
    if args.repeats < 1:
        raise UsageError("--repeats must be >= 1")
    _warm_up()
    sink = open(args.output, "w", newline="") if args.output else out
    try:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for src in args.instances:
            try:
                g = load_graph(src)
            except (UsageError, DimacsError) as exc:
                writer.writerow([src, "", "", "", "", "", "", "", "", "", f"error: {exc}"])
                continue
            pg, _ = degree_permute(g)
            seq_walls = []
            for _ in range(min(args.repeats, 3)):
                _, seq = max_clique(pg, timeout=args.timeout)
                seq_walls.append(seq.wall_time)
            seq_wall = statistics.fmean(seq_walls)
            for name in strategies:
                for workers in args.workers:
                    if name == "seq" and workers != 1:
                        continue
                    rows = []
                    for run in range(args.repeats):
                        seed = args.seed + run
                        strategy = parse_strategy(name, seed)
                        try:
                            inc, stats = solve_parallel(pg, workers, strategy, timeout=args.timeout)
                        except Exception as exc:  # recorded per row; the harness keeps going
                            writer.writerow([g.name, name, workers, run, "", "", "", "", "", "",
                                             f"error: {type(exc).__name__}: {exc}"])
                            continue
                        report = balance_report(stats, seq_wall)
                        row = [g.name, str(strategy), workers, run, round(1000 * stats.wall_time, 3),
                               stats.total_nodes, inc.size, round(report.speedup, 3),
                               round(1000 * report.minimum, 3), round(1000 * report.maximum, 3),
                               "ok" if stats.complete else "timeout"]
                        writer.writerow(row)
                        if stats.complete:
                            rows.append(row)
                    if rows:
                        writer.writerow(_summary_row(g.name, str(parse_strategy(name, args.seed)),
                                                     workers, rows, 1000 * seq_wall))
                    sink.flush()
    finally:
        if sink is not out:
            sink.close()
    if args.plot_script:
        Path(args.plot_script).write_text(PLOT_SCRIPT.format(csv=args.output or "bench.csv"))
    return EXIT_OK


def cmd_generate(args, out) -> int:
    g = load_graph(args.name, args.random)
    text = to_dimacs(g, comment=f"{g.name}: {g.n} vertices, {g.edge_count()} edges")
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pclique", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="find a maximum clique")
    solve.add_argument("input", nargs="?", help="DIMACS .clq file or family name")
    solve.add_argument("--random", type=_random_spec, metavar="N,P,SEED")
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--split", default="seq", help="seq|dist1|dist2|dist3|resplit|steal")
    solve.add_argument("--prime", type=int, default=0, metavar="B",
                       help="start as if a clique of size B were already known")
    solve.add_argument("--timeout", type=float, metavar="SECS")
    solve.add_argument("--seed", type=int, default=0, help="victim selection seed for steal")
    solve.set_defaults(func=cmd_solve)

    analyze = sub.add_parser("analyze", help="omega, total/prove nodes, avoid%%, location")
    analyze.add_argument("inputs", nargs="*")
    analyze.add_argument("--random", type=_random_spec, metavar="N,P,SEED")
    analyze.add_argument("--timeout", type=float, metavar="SECS")
    analyze.add_argument("--no-header", action="store_true")
    analyze.set_defaults(func=cmd_analyze)

    bench = sub.add_parser("bench", help="repeated timed runs as CSV")
    bench.add_argument("instances", nargs="+")
    bench.add_argument("--strategies", default="dist1")
    bench.add_argument("--workers", type=_int_list, default=[1])
    bench.add_argument("--repeats", type=int, default=10)
    bench.add_argument("--timeout", type=float, metavar="SECS")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("-o", "--output", help="CSV path (default stdout)")
    bench.add_argument("--plot-script", help="also write a matplotlib script for the CSV")
    bench.set_defaults(func=cmd_bench)

    gen = sub.add_parser("generate", help="write a constructed or random instance as DIMACS")
    gen.add_argument("name", nargs="?")
    gen.add_argument("--random", type=_random_spec, metavar="N,P,SEED")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_generate)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "prime", 0) < 0:
            raise UsageError("--prime must be >= 0")
        return args.func(args, out)
    except DimacsError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    raise SystemExit(main())
