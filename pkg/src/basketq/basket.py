"""K-baskets: bounded bags whose TAKE on an empty basket closes it for good.

Sequentially a basket is a pair ``(S, C)``. ``put`` may always answer
:data:`FULL`; otherwise it adds the item and bumps ``C`` unless ``C == K``.
``take`` removes some item of ``S``, or, when ``S`` is empty, sets ``C = K``
and answers :data:`CLOSED`.

Cells of the concurrent implementations hold one of three tagged states:
:data:`BOTTOM` (never written), an item, or :data:`TOP` (taken or cancelled).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ._backend import core
from .process import ProcessHandle, check_handle
from .status import CLOSED, FULL, OK, Status


class _Tag:
    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        self.name = name

    def __repr__(self) -> str:
        return self.name


BOTTOM = _Tag("BOTTOM")
TOP = _Tag("TOP")

_OPEN, _CLOSED = 0, 1


def _check_item(x: object) -> None:
    if x is BOTTOM or x is TOP or isinstance(x, Status):
        raise ValueError(f"{x!r} is reserved and cannot be stored")


@dataclass(frozen=True)
class BasketSpecState:
    """Immutable ``(S, C)`` pair of a basket with capacity ``k``."""

    k: int
    s: frozenset = frozenset()
    c: int = 0

    @property
    def closed(self) -> bool:
        return self.c == self.k and not self.s

    def put(self, x: object) -> list[tuple[object, BasketSpecState]]:
        """Every legal (response, next state) pair for ``put(x)``."""
        outcomes: list[tuple[object, BasketSpecState]] = [(FULL, self)]
        if self.c < self.k:
            outcomes.append((OK, replace(self, s=self.s | {x}, c=self.c + 1)))
        return outcomes

    def take(self) -> list[tuple[object, BasketSpecState]]:
        """Every legal (response, next state) pair for ``take()``."""
        if self.s:
            return [(x, replace(self, s=self.s - {x})) for x in self.s]
        return [(CLOSED, replace(self, c=self.k))]


class Basket:
    name = "basket"

    def put(self, h: ProcessHandle, x: object) -> Status:
        raise NotImplementedError

    def take(self, h: ProcessHandle) -> object:
        raise NotImplementedError

    def stored(self) -> list:
        """Items still sitting in cells; only meaningful at quiescence."""
        raise NotImplementedError

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other


class BasketSpec(Basket):
    """Sequential reference basket with deterministic choices.

    PUT never answers a spurious FULL and TAKE returns the oldest item.
    """

    name = "spec"

    def __init__(self, k: int, n: int | None = None) -> None:
        self.k = k
        self.n = n if n is not None else k
        self.state = BasketSpecState(k)
        self._order: list = []

    def put(self, h: ProcessHandle, x: object) -> Status:
        check_handle(h, self.n)
        _check_item(x)
        for result, nxt in self.state.put(x):
            if result is OK:
                self.state = nxt
                self._order.append(x)
                return OK
        return FULL

    def take(self, h: ProcessHandle) -> object:
        check_handle(h, self.n)
        if self._order:
            x = self._order.pop(0)
            self.state = replace(self.state, s=self.state.s - {x})
            return x
        self.state = self.state.take()[0][1]
        return CLOSED

    def stored(self) -> list:
        return list(self._order)


class FaiSwapBasket(Basket):
    """K-basket from fetch-and-increment and swap.

    ``PUTS`` and ``TAKES`` hand out slot tickets, so each cell is contested by
    at most one PUT and one TAKE, and a single SWAP decides between them.
    """

    name = "fai-swap"
    _PUTS, _TAKES, _STATE = 0, 1, 2

    def __init__(self, k: int, n: int | None = None) -> None:
        if k < 1:
            raise ValueError("capacity must be >= 1")
        self.k = k
        self.n = n if n is not None else k
        self.cells = core.AtomicRefArray(k, BOTTOM)
        self.shared = core.AtomicIntArray(3)

    def put(self, h: ProcessHandle, x: object) -> Status:
        check_handle(h, self.n)
        _check_item(x)
        shared, k = self.shared, self.k
        while True:
            h.steps += 2
            if shared.load(self._STATE) == _CLOSED or shared.load(self._PUTS) >= k:
                return FULL
            h.steps += 1
            i = shared.fai(self._PUTS)
            if i >= k:
                return FULL
            h.steps += 1
            if self.cells.swap(i, x) is BOTTOM:
                return OK
            # a TAKE cancelled slot i first; the next ticket decides

    def take(self, h: ProcessHandle) -> object:
        check_handle(h, self.n)
        shared, k = self.shared, self.k
        while True:
            h.steps += 2
            if shared.load(self._STATE) == _CLOSED or shared.load(self._TAKES) >= k:
                return CLOSED
            h.steps += 1
            i = shared.fai(self._TAKES)
            if i >= k:
                h.steps += 1
                shared.store(self._STATE, _CLOSED)
                return CLOSED
            h.steps += 1
            x = self.cells.swap(i, TOP)
            if x is not BOTTOM:
                return x

    def stored(self) -> list:
        # A PUT that loses its SWAP race leaves its item behind in a slot whose
        # TAKE ticket is already spent; only slots past TAKES are still live.
        live_from = min(self.shared.load(self._TAKES), self.k)
        cells = self.cells.snapshot()
        return [x for x in cells[live_from:] if x is not BOTTOM and x is not TOP]


class CasBasket(Basket):
    """n-basket where each process owns one cell and takers CAS cells to TOP.

    Every process keeps the set of cells it has not tried yet; it tries its
    own cell first, then random untried ones, and closes the basket once its
    set is exhausted.
    """

    name = "cas"

    def __init__(self, n: int) -> None:
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = self.k = n
        self.cells = core.AtomicRefArray(n, BOTTOM)
        self.state = core.AtomicIntArray(1)

    def put(self, h: ProcessHandle, x: object) -> Status:
        check_handle(h, self.n)
        _check_item(x)
        h.steps += 1
        if self.state.load(0) == _CLOSED:
            return FULL
        h.steps += 1
        if self.cells.load(h.pid) is BOTTOM:
            h.steps += 1
            if self.cells.cas(h.pid, BOTTOM, x):
                return OK
        return FULL

    def _compete(self, h: ProcessHandle, pos: int) -> object:
        h.steps += 1
        x = self.cells.load(pos)
        if x is TOP:
            return TOP
        h.steps += 1
        if self.cells.cas(pos, x, TOP):
            return x
        return BOTTOM

    def take(self, h: ProcessHandle) -> object:
        check_handle(h, self.n)
        takes = h.locals.get(self)
        if takes is None:
            takes = h.locals[self] = list(range(self.n))
        while True:
            h.steps += 1
            if self.state.load(0) == _CLOSED:
                return CLOSED
            if h.pid in takes:
                pos = h.pid
                takes.remove(pos)
            else:
                j = h.rng.randrange(len(takes))
                pos = takes[j]
                takes[j] = takes[-1]
                takes.pop()
            if not takes:
                h.steps += 1
                self.state.store(0, _CLOSED)
            x = self._compete(h, pos)
            if x is not BOTTOM and x is not TOP:
                return x
            if x is BOTTOM:
                x = self._compete(h, pos)
                if x is not BOTTOM and x is not TOP:
                    return x

    def stored(self) -> list:
        return [x for x in self.cells.snapshot() if x is not BOTTOM and x is not TOP]


BASKET_KINDS = {"spec": BasketSpec, "fai-swap": FaiSwapBasket, "cas": CasBasket}


def basket_factory(kind: str, n: int, k: int | None = None):
    """Return a zero-argument constructor for baskets of ``kind`` sized for ``n`` processes."""
    if kind == "cas":
        return lambda: CasBasket(n)
    cap = k if k is not None else n
    if kind == "fai-swap":
        return lambda: FaiSwapBasket(cap, n)
    if kind == "spec":
        return lambda: BasketSpec(cap, n)
    raise ValueError(f"unknown basket kind {kind!r}")
