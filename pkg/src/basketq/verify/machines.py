"""Step machines: the concurrent algorithms as explicit instruction streams.

Each operation is a generator that yields one shared-memory instruction at a
time and receives its result:

* ``("read", addr)`` -> value
* ``("write", addr, value)`` -> None
* ``("cas", addr, expected, new)`` -> bool
* ``("fai", addr)`` -> previous value
* ``("swap", addr, value)`` -> previous value
* ``("choose", n)`` -> an int in ``range(n)``; a nondeterministic local choice

Local computation between instructions is folded into the adjacent step since
it cannot affect interleavings. The generators follow the runtime classes in
:mod:`basketq.llic`, :mod:`basketq.basket` and :mod:`basketq.queue` line by
line. Addresses are tuples ending in ``(field, index)``; a field named ``A``
holds basket cells and starts at :data:`~basketq.basket.BOTTOM`, everything
else starts at 0.
"""

from __future__ import annotations

import itertools

from ..basket import BOTTOM, TOP
from ..status import CLOSED, EMPTY, FULL, OK
from .linearize import BasketModel, LLICModel, QueueModel, SequentialModel

_OPEN, _CLOSED = 0, 1


def default_value(addr: tuple) -> object:
    return BOTTOM if addr[-2] == "A" else 0


class Machine:
    """An object whose operations are instruction generators."""

    name = "machine"
    ops: tuple[str, ...] = ()

    def __init__(self, prefix: tuple = ()) -> None:
        self.prefix = prefix

    def addr(self, field: str, i: int = 0) -> tuple:
        return (*self.prefix, field, i)

    def run(self, name: str, pid: int, arg: object, local: dict):
        return getattr(self, name)(pid, arg, local)

    def model(self) -> SequentialModel:
        raise NotImplementedError


# --- LL/IC ----------------------------------------------------------------


class CasLLICMachine(Machine):
    name = "cas-llic"
    ops = ("ll", "ic")

    def ll(self, pid, arg, local):
        r = yield ("read", self.addr("R"))
        local[self.prefix] = r
        return r

    def ic(self, pid, arg, local):
        r = local[self.prefix]
        if (yield ("read", self.addr("R"))) == r:
            yield ("cas", self.addr("R"), r, r + 1)
        return OK

    def model(self):
        return LLICModel()


class RwLLICMachine(Machine):
    name = "rw-llic"
    ops = ("ll", "ic")

    def __init__(self, n: int, prefix: tuple = ()) -> None:
        super().__init__(prefix)
        self.n = n

    def _scan(self):
        mx = 0
        for i in range(self.n):
            v = yield ("read", self.addr("M", i))
            mx = max(mx, v)
        return mx

    def ll(self, pid, arg, local):
        mx = yield from self._scan()
        local[self.prefix] = mx
        return mx

    def ic(self, pid, arg, local):
        mx = local[self.prefix]
        if (yield from self._scan()) == mx:
            yield ("write", self.addr("M", pid), mx + 1)
        return OK

    def model(self):
        return LLICModel()


class MixedLLICMachine(Machine):
    name = "mixed-llic"
    ops = ("ll", "ic")

    def __init__(self, k: int = 2, prefix: tuple = ()) -> None:
        super().__init__(prefix)
        if k < 2:
            raise ValueError("K >= 2 required")
        self.k = k

    def ll(self, pid, arg, local):
        mx, ind = -1, 0
        for i in range(self.k):
            v = yield ("read", self.addr("M", i))
            if v > mx:
                mx, ind = v, i
        local[self.prefix] = (mx, ind)
        return mx

    def ic(self, pid, arg, local):
        mx, ind = local[self.prefix]
        eligible = [i for i in range(self.k) if i != ind]
        pos = eligible[(yield ("choose", len(eligible)))]
        x = yield ("read", self.addr("M", pos))
        if x < mx + 1:
            if (yield ("cas", self.addr("M", pos), x, mx + 1)):
                return OK
        if (yield ("read", self.addr("M", ind))) == mx:
            yield ("cas", self.addr("M", ind), mx, mx + 1)
        return OK

    def model(self):
        return LLICModel()


# --- baskets ----------------------------------------------------------------


class FaiSwapBasketMachine(Machine):
    name = "fai-swap-basket"
    ops = ("put", "take")

    def __init__(self, k: int, prefix: tuple = ()) -> None:
        super().__init__(prefix)
        self.k = k

    def put(self, pid, x, local):
        while True:
            state = yield ("read", self.addr("STATE"))
            puts = yield ("read", self.addr("PUTS"))
            if state == _CLOSED or puts >= self.k:
                return FULL
            puts = yield ("fai", self.addr("PUTS"))
            if puts >= self.k:
                return FULL
            if (yield ("swap", self.addr("A", puts), x)) is BOTTOM:
                return OK

    def take(self, pid, arg, local):
        while True:
            state = yield ("read", self.addr("STATE"))
            takes = yield ("read", self.addr("TAKES"))
            if state == _CLOSED or takes >= self.k:
                return CLOSED
            takes = yield ("fai", self.addr("TAKES"))
            if takes >= self.k:
                yield ("write", self.addr("STATE"), _CLOSED)
                return CLOSED
            x = yield ("swap", self.addr("A", takes), TOP)
            if x is not BOTTOM:
                return x

    def model(self):
        return BasketModel(self.k)


class CasBasketMachine(Machine):
    name = "cas-basket"
    ops = ("put", "take")

    def __init__(self, n: int, prefix: tuple = ()) -> None:
        super().__init__(prefix)
        self.n = n

    def put(self, pid, x, local):
        if (yield ("read", self.addr("STATE"))) == _CLOSED:
            return FULL
        if (yield ("read", self.addr("A", pid))) is BOTTOM:
            if (yield ("cas", self.addr("A", pid), BOTTOM, x)):
                return OK
        return FULL

    def _compete(self, pos):
        x = yield ("read", self.addr("A", pos))
        if x is TOP:
            return TOP
        if (yield ("cas", self.addr("A", pos), x, TOP)):
            return x
        return BOTTOM

    def take(self, pid, arg, local):
        takes = local.setdefault(self.prefix, list(range(self.n)))
        while True:
            if (yield ("read", self.addr("STATE"))) == _CLOSED:
                return CLOSED
            if pid in takes:
                pos = pid
            else:
                pos = sorted(takes)[(yield ("choose", len(takes)))]
            takes.remove(pos)
            if not takes:
                yield ("write", self.addr("STATE"), _CLOSED)
            x = yield from self._compete(pos)
            if x is not BOTTOM and x is not TOP:
                return x
            if x is BOTTOM:
                x = yield from self._compete(pos)
                if x is not BOTTOM and x is not TOP:
                    return x

    def model(self):
        return BasketModel(self.n)


# --- queue ------------------------------------------------------------------


class QueueMachine(Machine):
    """The baskets queue over machine-level LL/IC objects and baskets."""

    name = "queue"
    ops = ("enq", "deq")

    def __init__(self, llic_factory, basket_factory) -> None:
        super().__init__(())
        self.head = llic_factory(("H",))
        self.tail = llic_factory(("T",))
        self._basket_factory = basket_factory
        self._baskets: dict[int, Machine] = {}

    def basket(self, i: int) -> Machine:
        b = self._baskets.get(i)
        if b is None:
            b = self._baskets[i] = self._basket_factory(("B", i))
        return b

    def enq(self, pid, x, local):
        while True:
            tail = yield from self.tail.ll(pid, None, local)
            if (yield from self.basket(tail).put(pid, x, local)) is OK:
                yield from self.tail.ic(pid, None, local)
                return OK
            yield from self.tail.ic(pid, None, local)

    def deq(self, pid, arg, local):
        head = yield from self.head.ll(pid, None, local)
        tail = yield from self.tail.ll(pid, None, local)
        while True:
            if head < tail:
                x = yield from self.basket(head).take(pid, None, local)
                if x is not CLOSED:
                    return x
                yield from self.head.ic(pid, None, local)
            head2 = yield from self.head.ll(pid, None, local)
            tail2 = yield from self.tail.ll(pid, None, local)
            if head == head2 == tail2 == tail:
                return EMPTY
            head, tail = head2, tail2

    def model(self):
        return QueueModel()


def llic_machine(kind: str, n: int = 3, k: int = 2):
    """Factory ``prefix -> machine`` for an LL/IC kind."""
    if kind == "cas":
        return lambda prefix=(): CasLLICMachine(prefix)
    if kind == "rw":
        return lambda prefix=(): RwLLICMachine(n, prefix)
    if kind == "mixed":
        return lambda prefix=(): MixedLLICMachine(k, prefix)
    raise ValueError(f"unknown LL/IC kind {kind!r}")


def basket_machine(kind: str, n: int = 3, k: int | None = None):
    """Factory ``prefix -> machine`` for a basket kind."""
    if kind == "fai-swap":
        return lambda prefix=(): FaiSwapBasketMachine(k if k is not None else n, prefix)
    if kind == "cas":
        return lambda prefix=(): CasBasketMachine(n, prefix)
    raise ValueError(f"unknown basket kind {kind!r}")


# --- named algorithms and their workloads ------------------------------------

ALGORITHMS = (
    "cas-llic", "rw-llic", "mixed-llic", "fai-swap-basket", "cas-basket",
    *(f"queue-{l}-{b}" for l in ("cas", "rw", "mixed") for b in ("fai-swap", "cas")),
)


def make_machine(algo: str, n: int = 3, k: int = 2) -> Machine:
    """Build a machine by name. ``n`` sizes per-process arrays, ``k`` capacities."""
    if algo.endswith("-llic"):
        return llic_machine(algo[: -len("-llic")], n, k)()
    if algo == "fai-swap-basket":
        return FaiSwapBasketMachine(k)
    if algo == "cas-basket":
        return CasBasketMachine(n)
    if algo.startswith("queue-"):
        llic, _, basket = algo[len("queue-"):].partition("-")
        return QueueMachine(llic_machine(llic, n, k), basket_machine(basket, n))
    raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")


def llic_script(ops_per_proc: int) -> list[tuple[str, None]]:
    """``ll, ic, ll, ic, ...`` of the given length."""
    return [("ll" if i % 2 == 0 else "ic", None) for i in range(ops_per_proc)]


def basket_workloads(procs: int) -> list[list[list[tuple[str, object]]]]:
    """Every assignment of one put or one take to each process."""
    out = []
    for choice in itertools.product(("put", "take"), repeat=procs):
        out.append([
            [("put", f"x{p}")] if c == "put" else [("take", None)]
            for p, c in enumerate(choice)
        ])
    return out


def queue_workloads(procs: int, ops_per_proc: int) -> list[list[list[tuple[str, object]]]]:
    """Every enq/deq pattern; items are unique per (process, position)."""
    per_proc = []
    for p in range(procs):
        scripts = []
        for pattern in itertools.product(("enq", "deq"), repeat=ops_per_proc):
            scripts.append([
                ("enq", 10 * (p + 1) + j) if name == "enq" else ("deq", None)
                for j, name in enumerate(pattern)
            ])
        per_proc.append(scripts)
    return [list(combo) for combo in itertools.product(*per_proc)]


def workloads(machine: Machine, procs: int, ops_per_proc: int):
    """Default workloads for ``machine``: a list of per-process script lists."""
    if isinstance(machine, QueueMachine):
        return queue_workloads(procs, ops_per_proc)
    if "put" in machine.ops:
        return basket_workloads(procs)
    return [[llic_script(ops_per_proc) for _ in range(procs)]]
