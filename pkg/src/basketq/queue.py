"""The modular baskets queue.

Enqueuers put items into ``A[TAIL]`` and dequeuers take from ``A[HEAD]``,
where ``A`` is an unbounded array of baskets and ``HEAD``/``TAIL`` are LL/IC
objects. A failed PUT or a CLOSED TAKE advances the corresponding index by one
IC; concurrent enqueuers that land in the same basket are unordered among
themselves, which is exactly what a basket allows.
"""

from __future__ import annotations

import collections
import threading
from typing import Callable

from ._backend import core
from .basket import Basket, basket_factory
from .llic import LLIC, make_llic
from .process import ProcessGroup, ProcessHandle
from .status import CLOSED, EMPTY, OK, Status


class _Segment:
    __slots__ = ("base", "baskets", "next")

    def __init__(self, base: int, size: int, factory: Callable[[], Basket]) -> None:
        self.base = base
        self.baskets = [factory() for _ in range(size)]
        self.next = core.AtomicRefArray(1, None)


class SegmentedBasketArray:
    """Unbounded basket array built as a CAS-linked list of fixed-size segments.

    Index ``i`` lives in segment ``i // segment_size`` at offset
    ``i % segment_size``. Segments are created on demand; when two processes
    race to append the same segment, the CAS loser drops its copy. Segments
    are never reclaimed.
    """

    def __init__(self, factory: Callable[[], Basket], segment_size: int = 1024) -> None:
        if segment_size < 1:
            raise ValueError("segment_size must be positive")
        self.segment_size = segment_size
        self.factory = factory
        self.first = _Segment(0, segment_size, factory)

    def get(self, i: int, cursor: list | None = None) -> Basket:
        """Basket at index ``i``.

        ``cursor`` is an optional one-slot list owned by the caller that
        remembers the last segment it visited, so walks resume from there.
        """
        if i < 0:
            raise IndexError(i)
        size = self.segment_size
        seg = self.first
        if cursor is not None and cursor[0] is not None and cursor[0].base <= i:
            seg = cursor[0]
        while i >= seg.base + size:
            nxt = seg.next.load(0)
            if nxt is None:
                fresh = _Segment(seg.base + size, size, self.factory)
                if seg.next.cas(0, None, fresh):
                    nxt = fresh
                else:
                    nxt = seg.next.load(0)
            seg = nxt
        if cursor is not None:
            cursor[0] = seg
        return seg.baskets[i - seg.base]

    def segments(self) -> int:
        count, seg = 1, self.first
        while (seg := seg.next.load(0)) is not None:
            count += 1
        return count

    def __getitem__(self, i: int) -> Basket:
        return self.get(i)


class BasketsQueue:
    """Lock-free linearizable FIFO queue for ``n`` registered processes.

    ``llic`` is one of ``cas``, ``rw``, ``mixed`` or ``spec``; ``basket`` is one
    of ``fai-swap``, ``cas`` or ``spec``. The ``spec`` variants are sequential
    reference models and only valid single-threaded.
    """

    def __init__(
        self,
        n: int,
        llic: str = "cas",
        basket: str = "fai-swap",
        segment_size: int = 1024,
        seed: int = 0,
        *,
        k: int = 2,
        pad: bool = False,
        basket_capacity: int | None = None,
    ) -> None:
        self.n = n
        self.llic_kind = llic
        self.basket_kind = basket
        self.group = ProcessGroup(n, seed)
        self.head: LLIC = make_llic(llic, n, k=k, pad=pad)
        self.tail: LLIC = make_llic(llic, n, k=k, pad=pad)
        self.a = SegmentedBasketArray(basket_factory(basket, n, basket_capacity), segment_size)

    def register(self) -> ProcessHandle:
        return self.group.register()

    def _cursor(self, h: ProcessHandle, slot: int) -> list:
        cursors = h.locals.get(self)
        if cursors is None:
            cursors = h.locals[self] = ([None], [None])
        return cursors[slot]

    def enq_indexed(self, h: ProcessHandle, x: object) -> int:
        """Enqueue ``x`` and return the index of the basket that received it."""
        cursor = self._cursor(h, 0)
        while True:
            tail = self.tail.ll(h)
            if self.a.get(tail, cursor).put(h, x) is OK:
                self.tail.ic(h)
                return tail
            self.tail.ic(h)

    def enq(self, h: ProcessHandle, x: object) -> Status:
        self.enq_indexed(h, x)
        return OK

    def deq(self, h: ProcessHandle) -> object:
        """Dequeue an item, or return :data:`EMPTY`."""
        cursor = self._cursor(h, 1)
        head = self.head.ll(h)
        tail = self.tail.ll(h)
        while True:
            if head < tail:
                x = self.a.get(head, cursor).take(h)
                if x is not CLOSED:
                    return x
                self.head.ic(h)
            head2 = self.head.ll(h)
            tail2 = self.tail.ll(h)
            if head == head2 == tail2 == tail:
                return EMPTY
            head, tail = head2, tail2

    def drain_stored(self) -> list:
        """Items still inside baskets below the tail; quiescent use only."""
        out = []
        for i in range(self.tail.peek() + 1):
            out.extend(self.a.get(i).stored())
        return out


class MutexQueue:
    """A deque behind one lock: the FIFO oracle and differential baseline."""

    def __init__(self, n: int = 1, seed: int = 0) -> None:
        self.n = n
        self.group = ProcessGroup(n, seed)
        self._items: collections.deque = collections.deque()
        self._lock = threading.Lock()

    def register(self) -> ProcessHandle:
        return self.group.register()

    def enq(self, h: ProcessHandle | None, x: object) -> Status:
        with self._lock:
            self._items.append(x)
        return OK

    def deq(self, h: ProcessHandle | None = None) -> object:
        with self._lock:
            return self._items.popleft() if self._items else EMPTY

    def __len__(self) -> int:
        return len(self._items)
