"""Queue-history violation checkers.

A queue history in which every item is enqueued at most once is linearizable
exactly when it is free of four violations:

* ``VFresh``: a dequeue returns an item no enqueue inserted beforehand;
* ``VRepeat``: two dequeues return the same item;
* ``VOrd``: ``enq(x)`` precedes ``enq(y)``, yet a dequeue of ``y`` completes
  before any dequeue of ``x`` starts;
* ``VWit``: a dequeue returns EMPTY although some item is in the queue for
  the whole duration of that dequeue.

All checks run in ``O(m log m)`` over ``m`` operations. The VWit check only
flags items that are provably present throughout the EMPTY interval, so it
never raises a false alarm but may miss subtler wrongful EMPTYs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable

from ..status import EMPTY
from .history import History, Operation

VFRESH, VREPEAT, VORD, VWIT = "VFresh", "VRepeat", "VOrd", "VWit"
KINDS = (VFRESH, VREPEAT, VORD, VWIT)
_INF = float("inf")


@dataclass(frozen=True)
class ViolationReport:
    kind: str
    witnesses: tuple[int, ...]
    item: object = None
    other: object = None

    def __str__(self) -> str:
        items = f" item={self.item!r}" if self.item is not None else ""
        if self.other is not None:
            items += f" earlier={self.other!r}"
        return f"{self.kind}: ops {list(self.witnesses)}{items}"


class _QueueOps:
    """Index of enq/deq operations by item."""

    def __init__(self, ops: Iterable[Operation]) -> None:
        self.ops = {op.op_id: op for op in ops}
        self.enqs: dict[object, Operation] = {}
        self.deqs: dict[object, list[Operation]] = {}
        self.empties: list[Operation] = []
        for op in self.ops.values():
            if op.pending:
                raise ValueError(f"operation {op.op_id} is pending; checkers need a complete history")
            if op.name == "enq":
                prev = self.enqs.get(op.arg)
                if prev is None or op.inv < prev.inv:
                    self.enqs[op.arg] = op
            elif op.name == "deq":
                if op.result is EMPTY:
                    self.empties.append(op)
                else:
                    self.deqs.setdefault(op.result, []).append(op)

    def first_deq_inv(self, item: object) -> float:
        ds = self.deqs.get(item)
        return min(d.inv for d in ds) if ds else _INF

    def prefix_by_enq_response(self):
        """Enqueues sorted by response ts, with a running max of first-dequeue time.

        Returns ``(keys, best)`` where ``best[i]`` is the enq among the first
        ``i + 1`` whose item is dequeued latest (or never).
        """
        enqs = sorted(self.enqs.values(), key=lambda op: op.res)
        keys = [op.res for op in enqs]
        best: list[tuple[float, Operation]] = []
        cur: tuple[float, Operation] | None = None
        for op in enqs:
            t = self.first_deq_inv(op.arg)
            if cur is None or t > cur[0]:
                cur = (t, op)
            best.append(cur)
        return keys, best


def _index(history) -> _QueueOps:
    if isinstance(history, _QueueOps):
        return history
    if isinstance(history, History):
        return _QueueOps(history.operations())
    return _QueueOps(history)


def check_vfresh(history) -> list[ViolationReport]:
    q = _index(history)
    out = []
    for item, ds in q.deqs.items():
        enq = q.enqs.get(item)
        for d in ds:
            if enq is None or enq.inv > d.res:
                out.append(ViolationReport(VFRESH, (d.op_id,), item))
    return out


def check_vrepeat(history) -> list[ViolationReport]:
    q = _index(history)
    return [
        ViolationReport(VREPEAT, tuple(sorted(d.op_id for d in ds)), item)
        for item, ds in q.deqs.items()
        if len(ds) >= 2
    ]


def check_vord(history) -> list[ViolationReport]:
    q = _index(history)
    keys, best = q.prefix_by_enq_response()
    out = []
    for y, ds in q.deqs.items():
        enq_y = q.enqs.get(y)
        if enq_y is None:
            continue
        i = bisect.bisect_left(keys, enq_y.inv)
        if i == 0:
            continue
        t, enq_x = best[i - 1]
        d_y = min(ds, key=lambda d: d.res)
        if t > d_y.res:
            deq_x = q.deqs.get(enq_x.arg)
            wit = (enq_x.op_id, enq_y.op_id, d_y.op_id)
            if deq_x:
                wit += (min(deq_x, key=lambda d: d.inv).op_id,)
            out.append(ViolationReport(VORD, wit, y, enq_x.arg))
    return out


def check_vwit(history) -> list[ViolationReport]:
    q = _index(history)
    keys, best = q.prefix_by_enq_response()
    out = []
    for d in q.empties:
        i = bisect.bisect_left(keys, d.inv)
        if i == 0:
            continue
        t, enq_x = best[i - 1]
        if t > d.res:
            out.append(ViolationReport(VWIT, (d.op_id, enq_x.op_id), enq_x.arg))
    return out


CHECKERS = {VFRESH: check_vfresh, VREPEAT: check_vrepeat, VORD: check_vord, VWIT: check_vwit}


def check_all(history, obj: str | None = None) -> list[ViolationReport]:
    """Run all four checkers over the queue operations of ``history``."""
    ops = history.operations(obj) if isinstance(history, History) else list(history)
    q = _QueueOps(ops)
    out: list[ViolationReport] = []
    for check in CHECKERS.values():
        out.extend(check(q))
    return out


def confirm(report: ViolationReport, history) -> bool:
    """Re-derive ``report`` from raw operations by direct definition.

    Independent of the indexed checkers: scans every operation, no sorting
    or prefix structures.
    """
    ops = history.operations() if isinstance(history, History) else list(history)
    by_id = {op.op_id: op for op in ops}
    try:
        wit = [by_id[i] for i in report.witnesses]
    except KeyError:
        return False
    enqs = [op for op in ops if op.name == "enq"]
    deqs = [op for op in ops if op.name == "deq"]

    def dequeues_of(item):
        return [d for d in deqs if d.result is not EMPTY and d.result == item]

    if report.kind == VFRESH:
        (d,) = wit
        return d.name == "deq" and not any(e.arg == d.result and e.inv < d.res for e in enqs)
    if report.kind == VREPEAT:
        return len(wit) >= 2 and all(d.name == "deq" and d.result == report.item for d in wit)
    if report.kind == VORD:
        enq_x, enq_y, d_y = wit[:3]
        if not (enq_x.name == enq_y.name == "enq" and enq_x.precedes(enq_y)):
            return False
        if d_y.name != "deq" or d_y.result != enq_y.arg:
            return False
        return all(not (d.inv < d_y.res) for d in dequeues_of(enq_x.arg))
    if report.kind == VWIT:
        d, enq_x = wit
        if d.result is not EMPTY or not enq_x.precedes(d):
            return False
        return all(not (dx.inv < d.res) for dx in dequeues_of(enq_x.arg))
    return False
