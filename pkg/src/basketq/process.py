"""Process identities and their persistent per-process local state."""

from __future__ import annotations

import random
import threading
from typing import Any


class UsageError(Exception):
    """An object was used outside its contract (bad handle, IC before LL, ...)."""


class ProcessHandle:
    """Identity of a registered process plus its persistent locals.

    Locals are keyed by the shared object they belong to, so one handle can
    drive several LL/IC objects and baskets at once. A handle must be used by
    one thread at a time.
    """

    __slots__ = ("pid", "rng", "locals", "steps", "__weakref__")

    def __init__(self, pid: int, seed: int = 0) -> None:
        self.pid = pid
        self.rng = random.Random((seed << 16) ^ pid)
        self.locals: dict[Any, Any] = {}
        # shared-memory instructions executed through this handle
        self.steps = 0

    def __repr__(self) -> str:
        return f"ProcessHandle(pid={self.pid})"


class ProcessGroup:
    """Issues handles with ids ``0..n-1``; a fixed ``n`` is declared up front."""

    def __init__(self, n: int, seed: int = 0) -> None:
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.seed = seed
        self._next = 0
        self._lock = threading.Lock()

    def register(self) -> ProcessHandle:
        with self._lock:
            if self._next >= self.n:
                raise UsageError(f"all {self.n} process ids are already registered")
            pid = self._next
            self._next += 1
        return ProcessHandle(pid, self.seed)

    def register_all(self) -> list[ProcessHandle]:
        return [self.register() for _ in range(self.n - self._next)]


def check_handle(h: object, n: int) -> None:
    if not isinstance(h, ProcessHandle) or not 0 <= h.pid < n:
        raise UsageError(f"{h!r} is not registered with an object for {n} processes")
