"""LL/IC and queue microbenchmarks.

Each LL/IC worker repeats ``ll; work; ic; work`` (``fai; work`` for the FAI
baseline), where *work* is a purely local loop that adds a uniform draw from
1..5 until it reaches ``work_limit``. The run time is the slowest thread's
time for its share, and each configuration is repeated ``runs`` times.
"""

from __future__ import annotations

import csv
import math
import statistics
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from types import ModuleType

from ._backend import get_backend
from ._pycore import SplitMix64
from ._pycore import _work as _draw_work
from .llic import FaiCounter, make_llic
from .queue import BasketsQueue, MutexQueue
from .status import EMPTY
from .verify.checkers import check_all
from .verify.history import Recorder, RecordingQueue

LLIC_IMPLS = ("fai", "cas", "rw", "mixed")
IMPL_ALIASES = {"cas-llic": "cas", "rw-llic": "rw", "mixed-llic": "mixed"}
CSV_HEADER = ["impl", "threads", "ops_per_thread", "work_limit", "padding", "run", "seconds", "mean", "stddev"]


class BenchInvariantError(RuntimeError):
    """A benchmarked object ended in a state its contract rules out."""


@dataclass
class BenchConfig:
    impl: str = "cas"
    threads: int = 1
    ops_per_thread: int = 100_000
    work_limit: int = 25
    runs: int = 5
    padding: bool = False
    seed: int = 0
    k: int = 2
    backend: str = "auto"
    verify: bool = False

    def __post_init__(self) -> None:
        self.impl = IMPL_ALIASES.get(self.impl, self.impl)
        if min(self.threads, self.ops_per_thread, self.work_limit, self.runs) < 1:
            raise ValueError("threads, ops_per_thread, work_limit and runs must be positive")
        if self.k < 2:
            raise ValueError("mixed LL/IC needs K >= 2")
        if self.impl not in LLIC_IMPLS and parse_queue_impl(self.impl) is None:
            raise ValueError(f"unknown impl {self.impl!r}")

    @property
    def is_queue(self) -> bool:
        return self.impl.startswith("queue-")


@dataclass
class BenchResult:
    config: BenchConfig
    seconds: list[float] = field(default_factory=list)
    final_values: list[int] = field(default_factory=list)
    work_iterations: list[int] = field(default_factory=list)
    throughput: list[float] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.seconds)

    @property
    def stddev(self) -> float:
        return statistics.stdev(self.seconds) if len(self.seconds) > 1 else 0.0


def parse_queue_impl(impl: str) -> tuple[str, str] | None:
    """``queue-<llic>-<basket>`` -> ``(llic, basket)``, or None."""
    if not impl.startswith("queue-"):
        return None
    llic, _, basket = impl[len("queue-"):].partition("-")
    if llic not in ("cas", "rw", "mixed", "spec") or basket not in ("fai-swap", "cas", "spec"):
        return None
    return llic, basket


def random_work(rng: SplitMix64, limit: int = 25) -> int:
    """Local busy loop of increments drawn from 1..5 until ``limit``; returns iterations."""
    return _draw_work(rng, limit)


def thread_seed(seed: int, run: int, pid: int) -> int:
    return (seed * 1_000_003 + run * 1009 + pid) & ((1 << 64) - 1)


def _make_object(cfg: BenchConfig, backend: ModuleType):
    if cfg.impl == "fai":
        return FaiCounter(cfg.threads, backend=backend)
    return make_llic(cfg.impl, cfg.threads, k=cfg.k, pad=cfg.padding, backend=backend)


def check_llic_final(impl: str, threads: int, ops: int, final: int) -> None:
    """Side-check on the final counter: FAI exact, LL/IC between N and T*N."""
    if impl == "fai":
        if final != threads * ops:
            raise BenchInvariantError(f"fai counter {final} != {threads} * {ops}")
        return
    if not ops <= final <= threads * ops:
        raise BenchInvariantError(f"{impl} final value {final} outside [{ops}, {threads * ops}]")
    if threads == 1 and final != ops:
        raise BenchInvariantError(f"{impl} single-thread final value {final} != {ops}")


def run_llic_bench(cfg: BenchConfig) -> BenchResult:
    backend = get_backend(cfg.backend)
    result = BenchResult(cfg)
    for run in range(cfg.runs):
        obj = _make_object(cfg, backend)
        times = [0.0] * cfg.threads
        works = [0] * cfg.threads
        errors: list[BaseException] = []
        barrier = threading.Barrier(cfg.threads)

        def worker(pid: int) -> None:
            try:
                barrier.wait()
                times[pid], works[pid] = backend.llic_kernel(
                    cfg.impl, obj.cells, pid, cfg.ops_per_thread, cfg.work_limit,
                    thread_seed(cfg.seed, run, pid),
                )
            except BaseException as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(p,)) for p in range(cfg.threads)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        if errors:
            raise RuntimeError(f"benchmark worker failed: {errors[0]!r}") from errors[0]
        final = obj.peek()
        check_llic_final(cfg.impl, cfg.threads, cfg.ops_per_thread, final)
        result.seconds.append(max(times))
        result.final_values.append(final)
        result.work_iterations.append(sum(works))
        result.throughput.append(cfg.threads * cfg.ops_per_thread / max(max(times), 1e-12))
    return result


def run_queue_bench(cfg: BenchConfig) -> BenchResult:
    """Paired enqueuers/dequeuers with random work between operations.

    With one thread the run is sequential and every response is compared
    against a :class:`MutexQueue` oracle.
    """
    llic, basket = parse_queue_impl(cfg.impl) or (None, None)
    if llic is None:
        raise ValueError(f"not a queue impl: {cfg.impl!r}")
    result = BenchResult(cfg)
    for run in range(cfg.runs):
        q = BasketsQueue(cfg.threads, llic, basket, seed=cfg.seed, k=cfg.k, pad=cfg.padding)
        recorder = Recorder() if cfg.verify else None
        target = RecordingQueue(q, recorder) if recorder else q
        handles = [q.register() for _ in range(cfg.threads)]
        times = [0.0] * cfg.threads
        works = [0] * cfg.threads
        counts = [[0, 0] for _ in range(cfg.threads)]
        mismatches: list[str] = []
        errors: list[BaseException] = []
        barrier = threading.Barrier(cfg.threads)

        def sequential(h) -> None:
            rng = SplitMix64(thread_seed(cfg.seed, run, 0))
            oracle = MutexQueue()
            w = 0
            t0 = time.perf_counter()
            for i in range(cfg.ops_per_thread):
                if rng.next() % 2 == 0:
                    target.enq(h, i)
                    oracle.enq(None, i)
                    counts[0][0] += 1
                else:
                    got, want = target.deq(h), oracle.deq()
                    if got != want:
                        mismatches.append(f"op {i}: got {got!r}, oracle {want!r}")
                    if got is not EMPTY:
                        counts[0][1] += 1
                w += random_work(rng, cfg.work_limit)
            times[0], works[0] = time.perf_counter() - t0, w

        def worker(h) -> None:
            try:
                if cfg.threads == 1:
                    barrier.wait()
                    sequential(h)
                    return
                rng = SplitMix64(thread_seed(cfg.seed, run, h.pid))
                enqueuer = h.pid % 2 == 0
                w = 0
                barrier.wait()
                t0 = time.perf_counter()
                for i in range(cfg.ops_per_thread):
                    if enqueuer:
                        target.enq(h, (h.pid << 32) | i)
                        counts[h.pid][0] += 1
                    elif target.deq(h) is not EMPTY:
                        counts[h.pid][1] += 1
                    w += random_work(rng, cfg.work_limit)
                times[h.pid], works[h.pid] = time.perf_counter() - t0, w
            except BaseException as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(h,)) for h in handles]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        if errors:
            raise RuntimeError(f"benchmark worker failed: {errors[0]!r}") from errors[0]
        if mismatches:
            raise BenchInvariantError("FIFO oracle mismatch: " + "; ".join(mismatches[:3]))
        enqueued = sum(c[0] for c in counts)
        dequeued = sum(c[1] for c in counts)
        leftover = len(q.drain_stored())
        if enqueued - dequeued != leftover:
            raise BenchInvariantError(
                f"conservation: {enqueued} enqueued - {dequeued} dequeued != {leftover} left"
            )
        if recorder is not None:
            violations = check_all(recorder.history())
            if violations:
                raise BenchInvariantError(f"{len(violations)} violations, first: {violations[0]}")
        secs = max(times)
        result.seconds.append(secs)
        result.final_values.append(q.tail.peek())
        result.work_iterations.append(sum(works))
        result.throughput.append(cfg.threads * cfg.ops_per_thread / max(secs, 1e-12))
    return result


def run_bench(cfg: BenchConfig) -> BenchResult:
    return run_queue_bench(cfg) if cfg.is_queue else run_llic_bench(cfg)


def sweep(impls, threads, **kwargs) -> list[BenchResult]:
    """Run every ``impl`` x ``threads`` combination."""
    return [run_bench(BenchConfig(impl=i, threads=t, **kwargs)) for i in impls for t in threads]


def emit_csv(results: list[BenchResult], path) -> None:
    """One row per run; ``path`` may be a filename or an open text stream."""
    if not results:
        raise ValueError("no results to write")
    rows = []
    for r in results:
        c = r.config
        mean, sd = r.mean, r.stddev
        for run, secs in enumerate(r.seconds):
            rows.append([
                c.impl, c.threads, c.ops_per_thread, c.work_limit, int(c.padding),
                run, repr(secs), repr(mean), repr(sd),
            ])
    if hasattr(path, "write"):
        _write(path, rows)
    else:
        with open(path, "w", newline="") as fh:
            _write(fh, rows)


def _write(fh, rows) -> None:
    w = csv.writer(fh)
    w.writerow(CSV_HEADER)
    w.writerows(rows)


def load_csv(path) -> list[dict]:
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key in ("threads", "ops_per_thread", "work_limit", "padding", "run"):
            row[key] = int(row[key])
        for key in ("seconds", "mean", "stddev"):
            row[key] = float(row[key])
    return rows


def summarize(results: list[BenchResult]) -> list[dict]:
    return [
        {**asdict(r.config), "mean": r.mean, "stddev": r.stddev,
         "ops_per_sec": statistics.fmean(r.throughput) if r.throughput else math.nan}
        for r in results
    ]
