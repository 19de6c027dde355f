"""Pure-Python fallback for :mod:`basketq._core`.

Same classes and functions, same PRNG streams, so a single-threaded kernel run
produces identical results on either backend. Read-modify-write instructions
are serialized by a per-array lock; plain loads rely on the atomicity of list
indexing.
"""

from __future__ import annotations

import threading
import time

BACKEND = "python"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INDEX_STREAM = 0xD1B54A32D192ED03


class SplitMix64:
    """splitmix64 generator, bit-identical to the native core's."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = z = (self.state + _GOLDEN) & _MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)


class AtomicIntArray:
    """Fixed-size array of integer cells with atomic instructions.

    ``pad`` is accepted for API parity; Python lists have no cache-line layout
    to control.
    """

    __slots__ = ("_cells", "_lock", "size", "stride")

    def __init__(self, size: int, pad: bool = False) -> None:
        if size <= 0:
            raise ValueError("size must be positive")
        self.size = size
        self.stride = 8 if pad else 1
        self._cells = [0] * size
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return self.size

    @property
    def padded(self) -> bool:
        return self.stride != 1

    def load(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        return self._cells[i]

    def store(self, i: int, v: int) -> None:
        if i < 0:
            raise IndexError(i)
        with self._lock:
            self._cells[i] = v

    def cas(self, i: int, expected: int, desired: int) -> bool:
        if i < 0:
            raise IndexError(i)
        with self._lock:
            if self._cells[i] == expected:
                self._cells[i] = desired
                return True
            return False

    def fai(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        with self._lock:
            old = self._cells[i]
            self._cells[i] = old + 1
            return old

    def swap(self, i: int, v: int) -> int:
        if i < 0:
            raise IndexError(i)
        with self._lock:
            old = self._cells[i]
            self._cells[i] = v
            return old

    def snapshot(self) -> list[int]:
        return list(self._cells)


class AtomicRefArray:
    """Array of object references; CAS compares by identity."""

    __slots__ = ("_cells", "_lock", "size")

    def __init__(self, size: int, initial: object = None) -> None:
        if size <= 0:
            raise ValueError("size must be positive")
        self.size = size
        self._cells = [initial] * size
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return self.size

    def load(self, i: int) -> object:
        return self._cells[i]

    def store(self, i: int, v: object) -> None:
        with self._lock:
            self._cells[i] = v

    def cas(self, i: int, expected: object, desired: object) -> bool:
        with self._lock:
            if self._cells[i] is expected:
                self._cells[i] = desired
                return True
            return False

    def swap(self, i: int, v: object) -> object:
        with self._lock:
            old = self._cells[i]
            self._cells[i] = v
            return old

    def snapshot(self) -> list:
        return list(self._cells)


def _work(rng: SplitMix64, limit: int) -> int:
    c = it = 0
    while c < limit:
        c += rng.next() % 5 + 1
        it += 1
    return it


def random_work(seed: int, limit: int, rounds: int = 1) -> tuple[int, int]:
    """Run ``rounds`` work cycles from a fresh stream; return (iterations, state)."""
    rng = SplitMix64(seed)
    total = 0
    for _ in range(rounds):
        total += _work(rng, limit)
    return total, rng.state


def llic_kernel(impl: str, cells: AtomicIntArray, pid: int, ops: int, limit: int, seed: int):
    """Run ``ops`` rounds of (LL; work; IC; work), or (FAI; work) for ``fai``.

    Returns ``(elapsed_seconds, work_iterations)`` for this thread only.
    """
    if impl not in ("fai", "cas", "rw", "mixed"):
        raise ValueError(f"unknown kernel {impl!r}")
    size = cells.size
    if pid < 0 or (impl == "rw" and pid >= size):
        raise IndexError(pid)
    if impl == "mixed" and size < 2:
        raise ValueError("mixed kernel needs K >= 2")

    rng = SplitMix64(seed)
    prng = SplitMix64(seed ^ _INDEX_STREAM)
    load, cas = cells.load, cells.cas
    work_it = 0
    cells_range = range(size)
    t0 = time.perf_counter()
    if impl == "fai":
        fai = cells.fai
        for _ in range(ops):
            fai(0)
            work_it += _work(rng, limit)
    elif impl == "cas":
        for _ in range(ops):
            mx = load(0)
            work_it += _work(rng, limit)
            if load(0) == mx:
                cas(0, mx, mx + 1)
            work_it += _work(rng, limit)
    elif impl == "rw":
        store = cells.store
        for _ in range(ops):
            mx = max(load(j) for j in cells_range)
            work_it += _work(rng, limit)
            if max(load(j) for j in cells_range) == mx:
                store(pid, mx + 1)
            work_it += _work(rng, limit)
    else:
        for _ in range(ops):
            mx, ind = -1, 0
            for j in cells_range:
                v = load(j)
                if v > mx:
                    mx, ind = v, j
            work_it += _work(rng, limit)
            pos = prng.next() % (size - 1)
            if pos >= ind:
                pos += 1
            x = load(pos)
            if not (x < mx + 1 and cas(pos, x, mx + 1)):
                if load(ind) == mx:
                    cas(ind, mx, mx + 1)
            work_it += _work(rng, limit)
    return time.perf_counter() - t0, work_it
