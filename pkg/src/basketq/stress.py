"""Randomized multi-threaded stress runs of the queue with history checking."""

from __future__ import annotations

import contextlib
import random
import sys
import threading
import time
from dataclasses import dataclass, field

from .queue import BasketsQueue
from .status import EMPTY
from .verify.checkers import ViolationReport, check_all
from .verify.history import History, Recorder, RecordingQueue


@dataclass
class StressConfig:
    llic: str = "cas"
    basket: str = "fai-swap"
    threads: int = 8
    ops: int = 10_000
    seed: int = 0
    roles: str = "mixed"  # "mixed": each op is enq or deq at random; "split": half enqueue, half dequeue
    watchdog: float = 60.0
    segment_size: int = 1024
    k: int = 2
    pad: bool = False
    switch_interval: float | None = 1e-4

    def __post_init__(self) -> None:
        if self.threads < 1 or self.ops < 1:
            raise ValueError("threads and ops must be positive")
        if self.roles not in ("mixed", "split"):
            raise ValueError(f"unknown roles {self.roles!r}")
        if self.roles == "split" and self.threads < 2:
            raise ValueError("split roles need at least 2 threads")


@dataclass
class StressResult:
    config: StressConfig
    elapsed: float
    completed: int
    timed_out: bool
    history: History | None = None
    violations: list[ViolationReport] = field(default_factory=list)
    enqueued: int = 0
    dequeued: int = 0
    leftover: int = 0
    progress: list[int] = field(default_factory=list)

    @property
    def conserved(self) -> bool:
        return self.enqueued - self.dequeued == self.leftover

    @property
    def ok(self) -> bool:
        return not self.timed_out and not self.violations and self.conserved


def item_for(pid: int, seq: int) -> int:
    """Unique 64-bit payload for the ``seq``-th operation of process ``pid``."""
    return (pid << 32) | seq


@contextlib.contextmanager
def switch_interval(seconds: float | None):
    if seconds is None:
        yield
        return
    old = sys.getswitchinterval()
    sys.setswitchinterval(seconds)
    try:
        yield
    finally:
        sys.setswitchinterval(old)


def run_stress(cfg: StressConfig, *, record: bool = True) -> StressResult:
    """Run one stress round; check the recorded history when ``record``."""
    queue = BasketsQueue(
        cfg.threads, cfg.llic, cfg.basket, cfg.segment_size, cfg.seed, k=cfg.k, pad=cfg.pad
    )
    recorder = Recorder()
    target = RecordingQueue(queue, recorder) if record else queue
    handles = [queue.register() for _ in range(cfg.threads)]
    completed = [0] * cfg.threads
    enq_counts = [0] * cfg.threads
    deq_counts = [0] * cfg.threads
    start = threading.Barrier(cfg.threads + 1)

    def worker(h) -> None:
        pid = h.pid
        rng = random.Random(cfg.seed * 7919 + pid)
        if cfg.roles == "split":
            role = "enq" if pid % 2 == 0 else "deq"
        start.wait()
        for seq in range(cfg.ops):
            if role_is_enq(rng, role if cfg.roles == "split" else None):
                target.enq(h, item_for(pid, seq))
                enq_counts[pid] += 1
            elif target.deq(h) is not EMPTY:
                deq_counts[pid] += 1
            completed[pid] += 1

    threads = [threading.Thread(target=worker, args=(h,), daemon=True) for h in handles]
    with switch_interval(cfg.switch_interval):
        for t in threads:
            t.start()
        start.wait()
        t0 = time.perf_counter()
        deadline = t0 + cfg.watchdog
        progress = []
        for t in threads:
            while t.is_alive() and time.perf_counter() < deadline:
                t.join(timeout=min(0.25, max(0.0, deadline - time.perf_counter())))
                progress.append(sum(completed))
        elapsed = time.perf_counter() - t0
    timed_out = any(t.is_alive() for t in threads)
    result = StressResult(cfg, elapsed, sum(completed), timed_out, progress=progress)
    if timed_out:
        return result
    result.enqueued = sum(enq_counts)
    result.dequeued = sum(deq_counts)
    result.leftover = len(queue.drain_stored())
    if record:
        result.history = recorder.history()
        result.violations = check_all(result.history)
    return result


def role_is_enq(rng: random.Random, role: str | None) -> bool:
    if role is None:
        return rng.random() < 0.5
    return role == "enq"


COMBOS = [(l, b) for l in ("cas", "rw", "mixed") for b in ("fai-swap", "cas")]
