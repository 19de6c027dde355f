"""Command-line entry point: ``basketq {bench,stress,check,explore}``.

Exit codes: 0 success, 1 violation or non-linearizable history found,
2 usage error. ``BASKETQ_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import BenchConfig, BenchInvariantError, emit_csv, run_bench
from .process import UsageError
from .stress import StressConfig, run_stress
from .verify.checkers import check_all
from .verify.explore import BudgetExceeded, explore_and_check, to_history
from .verify.history import History
from .verify.linearize import HistoryTooLarge, linearize, model_by_name
from .verify.machines import ALGORITHMS, make_machine, workloads

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SEED_ENV = "BASKETQ_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="basketq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="LL/IC or queue microbenchmark, CSV output")
    b.add_argument("--impl", default="cas",
                   help="comma list of fai, cas, rw, mixed or queue-<llic>-<basket>")
    b.add_argument("--threads", type=_int_list, default=[1], help="comma list, e.g. 1,2,4,8")
    b.add_argument("--ops", type=int, default=100_000, help="operations per thread")
    b.add_argument("--work-limit", type=int, default=25)
    b.add_argument("--runs", type=int, default=5)
    b.add_argument("--padding", action="store_true")
    b.add_argument("--k", type=int, default=2, help="cells of the mixed LL/IC")
    b.add_argument("--seed", type=int)
    b.add_argument("--backend", choices=("auto", "native", "python"), default="auto")
    b.add_argument("--verify", action="store_true", help="record and check queue histories")
    b.add_argument("--output", "-o", help="CSV path (default stdout)")

    s = sub.add_parser("stress", help="randomized queue stress with violation checks")
    s.add_argument("--llic", choices=("cas", "rw", "mixed"), default="cas")
    s.add_argument("--basket", choices=("fai-swap", "cas"), default="fai-swap")
    s.add_argument("--threads", type=int, default=8)
    s.add_argument("--ops", type=int, default=10_000)
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--roles", choices=("mixed", "split"), default="mixed")
    s.add_argument("--watchdog", type=float, default=60.0, help="seconds per run")
    s.add_argument("--seed", type=int)
    s.add_argument("--history-out", help="write the last run's history here")

    c = sub.add_parser("check", help="run the violation checkers on a history file")
    c.add_argument("history")
    c.add_argument("--object", help="only check events on this object")
    c.add_argument("--linearize", metavar="MODEL", help="also run the oracle: llic, queue, basket:K")

    e = sub.add_parser("explore", help="exhaustive interleavings + linearizability oracle")
    e.add_argument("--algo", choices=ALGORITHMS, required=True)
    e.add_argument("--procs", type=int, default=2)
    e.add_argument("--ops", type=int, default=2, help="operations per process")
    e.add_argument("--n", type=int, help="process slots of per-process arrays (default --procs)")
    e.add_argument("--k", type=int, default=2)
    e.add_argument("--budget", type=int, default=2_000_000, help="state budget")
    return p


def cmd_bench(args, out) -> int:
    seed = default_seed() if args.seed is None else args.seed
    results = []
    for impl in args.impl.split(","):
        for t in args.threads:
            cfg = BenchConfig(impl=impl, threads=t, ops_per_thread=args.ops,
                              work_limit=args.work_limit, runs=args.runs, padding=args.padding,
                              seed=seed, k=args.k, backend=args.backend, verify=args.verify)
            try:
                results.append(run_bench(cfg))
            except BenchInvariantError as exc:
                print(f"invariant failed: {exc}", file=sys.stderr)
                return EXIT_VIOLATION
    if args.output:
        emit_csv(results, args.output)
    else:
        emit_csv(results, out)
    return EXIT_OK


def cmd_stress(args, out) -> int:
    seed = default_seed() if args.seed is None else args.seed
    status = EXIT_OK
    for run in range(args.runs):
        cfg = StressConfig(llic=args.llic, basket=args.basket, threads=args.threads,
                           ops=args.ops, seed=seed + run, roles=args.roles,
                           watchdog=args.watchdog)
        res = run_stress(cfg)
        line = (f"run {run}: {args.llic}/{args.basket} {res.completed} ops "
                f"in {res.elapsed:.2f}s")
        if res.timed_out:
            print(f"{line} TIMEOUT after {args.watchdog}s", file=out)
            return EXIT_VIOLATION
        print(f"{line}, {len(res.violations)} violations, "
              f"conserved={res.conserved}", file=out)
        for v in res.violations[:10]:
            print(f"  {v}", file=out)
        if not res.ok:
            status = EXIT_VIOLATION
        if args.history_out and res.history is not None:
            res.history.save(args.history_out)
    return status


def cmd_check(args, out) -> int:
    try:
        history = History.load(args.history)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    violations = check_all(history, args.object)
    for v in violations:
        print(v, file=out)
    print(f"{len(history)} events, {len(violations)} violations", file=out)
    status = EXIT_VIOLATION if violations else EXIT_OK
    if args.linearize:
        try:
            verdict = linearize(history, model_by_name(args.linearize))
        except HistoryTooLarge as exc:
            raise UsageError(str(exc)) from None
        print("linearizable" if verdict else "NOT linearizable", file=out)
        if not verdict:
            status = EXIT_VIOLATION
    return status


def cmd_explore(args, out) -> int:
    n = args.n if args.n is not None else args.procs
    if args.procs < 1 or args.ops < 1:
        raise UsageError("--procs and --ops must be positive")
    if n < args.procs:
        raise UsageError("--n must be at least --procs")
    machine = make_machine(args.algo, n=n, k=args.k)
    try:
        summary = explore_and_check(machine, workloads(machine, args.procs, args.ops),
                                    budget=args.budget)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE
    steps = ", ".join(f"{k}<={v}" for k, v in sorted(summary.max_steps.items()))
    print(f"{args.algo}: {summary.interleavings} interleavings, {summary.states} states, "
          f"max steps {steps}", file=out)
    if summary.ok:
        print(f"all {summary.histories} histories linearizable", file=out)
        return EXIT_OK
    print(f"{len(summary.failures)} of {summary.histories} histories NOT linearizable", file=out)
    for events in summary.failures[:3]:
        print(to_history(events, args.algo).dumps(), file=out)
    return EXIT_VIOLATION


COMMANDS = {"bench": cmd_bench, "stress": cmd_stress, "check": cmd_check, "explore": cmd_explore}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ValueError) as exc:
        print(f"basketq {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
