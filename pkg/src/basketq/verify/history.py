"""Timestamped invocation/response histories and their text format.

One event per line::

    ts op_id proc object kind label

``kind`` is ``inv`` or ``res``. An invocation label is ``name(arg)`` (empty
parentheses for no argument); a response label is ``name->result``. Values are
decimal integers, bare status names (``OK``, ``FULL``, ``CLOSED``, ``EMPTY``)
or JSON strings.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

from ..process import UsageError
from ..status import Status

INV, RES = "inv", "res"
_NOARG = object()


class HistoryEvent(NamedTuple):
    ts: int
    op_id: int
    proc: int
    object: str
    kind: str
    name: str
    value: object = None

    @property
    def label(self) -> str:
        if self.kind == INV:
            arg = "" if self.value is None else format_value(self.value)
            return f"{self.name}({arg})"
        return f"{self.name}->{format_value(self.value)}"

    def to_line(self) -> str:
        return f"{self.ts} {self.op_id} {self.proc} {self.object} {self.kind} {self.label}"


@dataclass(frozen=True)
class Operation:
    """An invocation paired with its response (``res`` is None while pending)."""

    op_id: int
    proc: int
    object: str
    name: str
    arg: object
    result: object
    inv: int
    res: int | None

    @property
    def pending(self) -> bool:
        return self.res is None

    def precedes(self, other: Operation) -> bool:
        """Real-time order: self responded before other was invoked."""
        return self.res is not None and self.res < other.inv


def format_value(v: object) -> str:
    if isinstance(v, Status):
        return v.value
    if isinstance(v, bool):
        raise TypeError("booleans are not history values")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"cannot serialize history value {v!r}")


_INT = re.compile(r"-?\d+\Z")


def parse_value(text: str) -> object:
    if _INT.match(text):
        return int(text)
    if text in Status.__members__:
        return Status[text]
    if text.startswith('"'):
        return json.loads(text)
    raise ValueError(f"bad history value {text!r}")


def parse_line(line: str) -> HistoryEvent:
    parts = line.strip().split(" ", 5)
    if len(parts) != 6:
        raise ValueError(f"malformed history line {line!r}")
    ts, op_id, proc, obj, kind, label = parts
    if kind == INV:
        m = re.fullmatch(r"(\w+)\((.*)\)", label)
        if not m:
            raise ValueError(f"bad invocation label {label!r}")
        name, arg = m.group(1), m.group(2)
        value = parse_value(arg) if arg else None
    elif kind == RES:
        name, sep, res = label.partition("->")
        if not sep:
            raise ValueError(f"bad response label {label!r}")
        value = parse_value(res)
    else:
        raise ValueError(f"bad event kind {kind!r}")
    return HistoryEvent(int(ts), int(op_id), int(proc), obj, kind, name, value)


class History:
    """An immutable, ts-ordered sequence of events."""

    def __init__(self, events: Iterable[HistoryEvent]) -> None:
        self.events: list[HistoryEvent] = sorted(events)
        self._ops: list[Operation] | None = None

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def operations(self, obj: str | None = None) -> list[Operation]:
        """Pair invocations with responses, ordered by invocation time."""
        if self._ops is None:
            invs: dict[int, HistoryEvent] = {}
            ress: dict[int, HistoryEvent] = {}
            last_ts = None
            for e in self.events:
                if e.ts == last_ts:
                    raise ValueError(f"duplicate timestamp {e.ts}")
                last_ts = e.ts
                if e.kind == INV:
                    if e.op_id in invs:
                        raise ValueError(f"op {e.op_id} invoked twice")
                    invs[e.op_id] = e
                else:
                    inv = invs.get(e.op_id)
                    if inv is None:
                        raise ValueError(f"op {e.op_id} responds before it is invoked")
                    if e.op_id in ress:
                        raise ValueError(f"op {e.op_id} responded twice")
                    ress[e.op_id] = e
            ops = []
            for op_id, i in invs.items():
                r = ress.get(op_id)
                ops.append(
                    Operation(
                        op_id, i.proc, i.object, i.name, i.value,
                        r.value if r else None, i.ts, r.ts if r else None,
                    )
                )
            self._ops = ops
        if obj is None:
            return list(self._ops)
        return [op for op in self._ops if op.object == obj]

    def complete(self) -> bool:
        return all(not op.pending for op in self.operations())

    def dumps(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> History:
        return cls(parse_line(line) for line in text.splitlines() if line.strip())

    @classmethod
    def load(cls, path: str | Path) -> History:
        return cls.loads(Path(path).read_text())

    @classmethod
    def from_ops(cls, ops: Iterable[tuple], obj: str = "q") -> History:
        """Build a history from ``(proc, name, arg, result, inv_ts, res_ts)`` tuples."""
        events = []
        for op_id, (proc, name, arg, result, inv, res) in enumerate(ops):
            events.append(HistoryEvent(inv, op_id, proc, obj, INV, name, arg))
            if res is not None:
                events.append(HistoryEvent(res, op_id, proc, obj, RES, name, result))
        return cls(events)


class Recorder:
    """Thread-safe event sink with a global monotone timestamp.

    Timestamps come from one shared counter, so the ts order of events is
    consistent with real time: an event drawn after another one completed
    always gets a larger ts.
    """

    def __init__(self) -> None:
        self._ts = itertools.count()
        self._ids = itertools.count()
        self._open: dict[int, tuple[int, str, str]] = {}
        self.events: list[HistoryEvent] = []

    def record(self, event: HistoryEvent) -> None:
        if event.kind == RES:
            if self._open.pop(event.op_id, None) is None:
                raise UsageError(f"response for op {event.op_id} without an open invocation")
        elif event.kind == INV:
            if event.op_id in self._open:
                raise UsageError(f"op {event.op_id} is already open")
            self._open[event.op_id] = (event.proc, event.object, event.name)
        else:
            raise UsageError(f"bad event kind {event.kind!r}")
        self.events.append(event)

    def invoke(self, proc: int, obj: str, name: str, arg: object = None) -> int:
        op_id = next(self._ids)
        self.record(HistoryEvent(next(self._ts), op_id, proc, obj, INV, name, arg))
        return op_id

    def respond(self, op_id: int, result: object) -> None:
        try:
            proc, obj, name = self._open[op_id]
        except KeyError:
            raise UsageError(f"response for op {op_id} without an open invocation") from None
        self.record(HistoryEvent(next(self._ts), op_id, proc, obj, RES, name, result))

    def history(self) -> History:
        return History(self.events)


class RecordingQueue:
    """Wraps a queue so every ``enq``/``deq`` lands in a :class:`Recorder`."""

    def __init__(self, queue, recorder: Recorder, name: str = "q") -> None:
        self.queue = queue
        self.recorder = recorder
        self.name = name

    def register(self):
        return self.queue.register()

    def enq(self, h, x):
        op = self.recorder.invoke(h.pid, self.name, "enq", x)
        r = self.queue.enq(h, x)
        self.recorder.respond(op, r)
        return r

    def deq(self, h):
        op = self.recorder.invoke(h.pid, self.name, "deq")
        r = self.queue.deq(h)
        self.recorder.respond(op, r)
        return r
