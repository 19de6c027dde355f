"""Brute-force linearizability oracle for small histories.

Wing & Gong search: repeatedly pick a minimal pending operation (one invoked
before every remaining operation has responded), replay it against a
sequential model, and backtrack on failure. Model nondeterminism is explored
by branching over every legal successor state. Failed ``(linearized set,
state)`` pairs are memoized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..basket import BasketSpecState
from ..llic import LLICSpecState
from ..process import UsageError
from ..status import EMPTY, OK
from .history import History, Operation

MAX_OPS = 16


class HistoryTooLarge(ValueError):
    pass


class SequentialModel:
    """A sequential specification: initial state plus a transition relation."""

    name = "model"

    def initial(self):
        raise NotImplementedError

    def step(self, state, op: Operation) -> list:
        """All successor states in which ``op`` returns ``op.result``."""
        raise NotImplementedError


class LLICModel(SequentialModel):
    name = "llic"

    def initial(self):
        return LLICSpecState()

    def step(self, state: LLICSpecState, op: Operation) -> list:
        if op.name == "ll":
            v, nxt = state.ll(op.proc)
            return [nxt] if v == op.result else []
        if op.name == "ic":
            if op.result is not OK:
                return []
            try:
                return [state.ic(op.proc)]
            except UsageError:
                return []
        raise ValueError(f"unknown LL/IC operation {op.name!r}")


class BasketModel(SequentialModel):
    name = "basket"

    def __init__(self, k: int) -> None:
        self.k = k

    def initial(self):
        return BasketSpecState(self.k)

    def step(self, state: BasketSpecState, op: Operation) -> list:
        if op.name == "put":
            outcomes = state.put(op.arg)
        elif op.name == "take":
            outcomes = state.take()
        else:
            raise ValueError(f"unknown basket operation {op.name!r}")
        return [nxt for r, nxt in outcomes if r == op.result]


class QueueModel(SequentialModel):
    name = "queue"

    def initial(self):
        return ()

    def step(self, state: tuple, op: Operation) -> list:
        if op.name == "enq":
            return [state + (op.arg,)] if op.result is OK else []
        if op.name == "deq":
            if not state:
                return [state] if op.result is EMPTY else []
            return [state[1:]] if op.result == state[0] and op.result is not EMPTY else []
        raise ValueError(f"unknown queue operation {op.name!r}")


def model_by_name(spec: str) -> SequentialModel:
    """``llic``, ``queue`` or ``basket:K``."""
    if spec == "llic":
        return LLICModel()
    if spec == "queue":
        return QueueModel()
    if spec.startswith("basket:"):
        return BasketModel(int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown model {spec!r}")


@dataclass(frozen=True)
class LinearizeResult:
    linearizable: bool
    order: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.linearizable


def linearize(history, model, max_ops: int = MAX_OPS) -> LinearizeResult:
    """Search for a linearization of ``history`` against ``model``.

    ``history`` is a :class:`History` or an iterable of complete
    :class:`Operation`. Returns the witness order of op ids, or a negative
    result.
    """
    if isinstance(model, str):
        model = model_by_name(model)
    ops: list[Operation] = (
        history.operations() if isinstance(history, History) else list(history)
    )
    if len(ops) > max_ops:
        raise HistoryTooLarge(f"{len(ops)} operations exceed the oracle limit of {max_ops}")
    if any(op.pending for op in ops):
        raise ValueError("linearize needs a complete history")
    ops.sort(key=lambda op: op.inv)
    m = len(ops)
    full = (1 << m) - 1
    failed: set = set()
    order: list[int] = []

    def search(done: int, state) -> bool:
        if done == full:
            return True
        key = (done, state)
        if key in failed:
            return False
        horizon = min(ops[i].res for i in range(m) if not done >> i & 1)
        for i in range(m):
            if done >> i & 1:
                continue
            op = ops[i]
            if op.inv > horizon:
                break
            for nxt in model.step(state, op):
                order.append(op.op_id)
                if search(done | 1 << i, nxt):
                    return True
                order.pop()
        failed.add(key)
        return False

    if search(0, model.initial()):
        return LinearizeResult(True, tuple(order))
    return LinearizeResult(False)


def is_linearizable(ops: Iterable[Operation], model) -> bool:
    return linearize(list(ops), model).linearizable
