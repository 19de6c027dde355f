"""Load-link/increment-conditional objects.

An LL/IC object holds a counter ``R`` starting at 0. ``ll`` returns ``R`` and
links the caller; ``ic`` increments ``R`` only if it was not incremented since
the caller's last ``ll``, and always returns :data:`OK`.

Three wait-free implementations are provided, differing in the instructions
they need: :class:`CasLLIC` (one register, CAS), :class:`RwLLIC` (one cell per
process, plain reads and writes) and :class:`MixedLLIC` (``K`` cells, CAS).
:class:`FaiCounter` is the fetch-and-increment baseline used by the benchmarks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import ModuleType

from ._backend import core
from .process import ProcessHandle, UsageError, check_handle
from .status import OK


@dataclass(frozen=True)
class LLICSpecState:
    """Immutable sequential state: the counter and each process's last link."""

    r: int = 0
    linked: tuple[tuple[int, int], ...] = field(default=())

    def link_of(self, pid: int) -> int | None:
        for p, v in self.linked:
            if p == pid:
                return v
        return None

    def ll(self, pid: int) -> tuple[int, LLICSpecState]:
        links = dict(self.linked)
        links[pid] = self.r
        return self.r, replace(self, linked=tuple(sorted(links.items())))

    def ic(self, pid: int) -> LLICSpecState:
        v = self.link_of(pid)
        if v is None:
            raise UsageError(f"process {pid} invoked ic before ll")
        # R only grows by one, so "not incremented since the link" is R == v.
        if self.r == v:
            return replace(self, r=self.r + 1)
        return self


class LLIC:
    """Common surface of the LL/IC implementations."""

    name = "llic"

    def __init__(self, n: int) -> None:
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n

    def ll(self, h: ProcessHandle) -> int:
        raise NotImplementedError

    def ic(self, h: ProcessHandle) -> object:
        raise NotImplementedError

    def peek(self) -> int:
        """Abstract value read without linking; only meaningful at quiescence."""
        raise NotImplementedError

    def _link(self, h: ProcessHandle):
        check_handle(h, self.n)
        try:
            return h.locals[self]
        except KeyError:
            raise UsageError(f"process {h.pid} invoked ic before ll") from None

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other


class LLICSpec(LLIC):
    """Sequential reference model behind the handle-based interface.

    Not thread-safe; used for single-threaded differential runs.
    """

    name = "spec"

    def __init__(self, n: int) -> None:
        super().__init__(n)
        self.state = LLICSpecState()

    def ll(self, h: ProcessHandle) -> int:
        check_handle(h, self.n)
        v, self.state = self.state.ll(h.pid)
        h.locals[self] = v
        return v

    def ic(self, h: ProcessHandle) -> object:
        self._link(h)
        self.state = self.state.ic(h.pid)
        return OK

    def peek(self) -> int:
        return self.state.r


class CasLLIC(LLIC):
    """A single register ``R`` advanced by compare-and-set."""

    name = "cas"

    def __init__(self, n: int, backend: ModuleType | None = None) -> None:
        super().__init__(n)
        self.cells = (backend or core).AtomicIntArray(1)

    def ll(self, h: ProcessHandle) -> int:
        check_handle(h, self.n)
        r = self.cells.load(0)
        h.locals[self] = r
        h.steps += 1
        return r

    def ic(self, h: ProcessHandle) -> object:
        r = self._link(h)
        h.steps += 1
        if self.cells.load(0) == r:
            h.steps += 1
            self.cells.cas(0, r, r + 1)
        return OK

    def peek(self) -> int:
        return self.cells.load(0)


class RwLLIC(LLIC):
    """One cell per process, read and written with plain instructions.

    ``ll`` returns the maximum of an index-ascending scan. ``ic`` rescans and,
    if the maximum is still the linked value, writes ``max + 1`` into the
    caller's own cell.
    """

    name = "rw"

    def __init__(self, n: int, pad: bool = False, backend: ModuleType | None = None) -> None:
        super().__init__(n)
        self.cells = (backend or core).AtomicIntArray(n, pad)

    def _scan(self) -> int:
        load = self.cells.load
        return max(load(i) for i in range(self.n))

    def ll(self, h: ProcessHandle) -> int:
        check_handle(h, self.n)
        mx = self._scan()
        h.locals[self] = mx
        h.steps += self.n
        return mx

    def ic(self, h: ProcessHandle) -> object:
        mx = self._link(h)
        h.steps += self.n
        if self._scan() == mx:
            h.steps += 1
            self.cells.store(h.pid, mx + 1)
        return OK

    def peek(self) -> int:
        return max(self.cells.snapshot())


class MixedLLIC(LLIC):
    """``K`` CAS-modified cells shared by all processes.

    ``ll`` records the maximum and the smallest index holding it. ``ic`` first
    tries to raise a random other cell to ``max + 1``; if that fails it falls
    back to a CAS on the cell the maximum was read from.
    """

    name = "mixed"

    def __init__(
        self, n: int, k: int = 2, pad: bool = False, backend: ModuleType | None = None
    ) -> None:
        super().__init__(n)
        if k < 2:
            raise ValueError("MixedLLIC needs K >= 2")
        self.k = k
        self.cells = (backend or core).AtomicIntArray(k, pad)

    def ll(self, h: ProcessHandle) -> int:
        check_handle(h, self.n)
        load = self.cells.load
        mx, ind = -1, 0
        for i in range(self.k):
            v = load(i)
            if v > mx:
                mx, ind = v, i
        h.locals[self] = (mx, ind)
        h.steps += self.k
        return mx

    def ic(self, h: ProcessHandle) -> object:
        mx, ind = self._link(h)
        cells = self.cells
        pos = h.rng.randrange(self.k - 1)
        if pos >= ind:
            pos += 1
        h.steps += 1
        x = cells.load(pos)
        if x < mx + 1:
            h.steps += 1
            if cells.cas(pos, x, mx + 1):
                return OK
        h.steps += 1
        if cells.load(ind) == mx:
            h.steps += 1
            cells.cas(ind, mx, mx + 1)
        return OK

    def peek(self) -> int:
        return max(self.cells.snapshot())


class FaiCounter:
    """Fetch-and-increment register; the benchmark baseline, not an LL/IC."""

    name = "fai"

    def __init__(self, n: int = 1, backend: ModuleType | None = None) -> None:
        self.n = n
        self.cells = (backend or core).AtomicIntArray(1)

    def fai(self, h: ProcessHandle | None = None) -> int:
        if h is not None:
            h.steps += 1
        return self.cells.fai(0)

    def peek(self) -> int:
        return self.cells.load(0)


LLIC_KINDS = {"spec": LLICSpec, "cas": CasLLIC, "rw": RwLLIC, "mixed": MixedLLIC}


def make_llic(
    kind: str, n: int, *, k: int = 2, pad: bool = False, backend: ModuleType | None = None
) -> LLIC:
    """Build an LL/IC object by short name (``spec``, ``cas``, ``rw``, ``mixed``)."""
    if kind == "rw":
        return RwLLIC(n, pad=pad, backend=backend)
    if kind == "mixed":
        return MixedLLIC(n, k=k, pad=pad, backend=backend)
    if kind == "cas":
        return CasLLIC(n, backend=backend)
    if kind == "spec":
        return LLICSpec(n)
    raise ValueError(f"unknown LL/IC kind {kind!r}")
