"""Exhaustive interleaving explorer for step machines.

Explores every schedule of the processes' shared-memory instructions. States
are memoized on (memory, each process's received results, history so far):
a process's local state is a function of the results it has received, so two
schedules reaching the same key have identical futures. The number of
schedules is still counted exactly, by summing over the memoized DAG.

An operation's invocation is emitted together with its first instruction and
its response together with its last. Those are the tightest possible
intervals, so if every such history is linearizable, so is every history with
wider intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .history import INV, RES, History, HistoryEvent
from .linearize import LinearizeResult, linearize
from .machines import Machine, default_value

_DONE = ("done",)
DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ExploreResult:
    histories: set = field(default_factory=set)
    interleavings: int = 0
    states: int = 0
    max_steps: dict = field(default_factory=dict)

    def to_histories(self, obj: str = "obj") -> list[History]:
        return [to_history(h, obj) for h in sorted(self.histories, key=repr)]


def to_history(events: tuple, obj: str = "obj") -> History:
    """Turn an explorer event tuple into a :class:`History` (ts = position)."""
    out = []
    open_ops: dict[int, int] = {}
    for ts, (pid, kind, name, value) in enumerate(events):
        if kind == INV:
            op_id = open_ops[pid] = len(out)
        else:
            op_id = open_ops.pop(pid)
        out.append(HistoryEvent(ts, op_id, pid, obj, kind, name, value))
    return History(out)


def _process(machine: Machine, pid: int, script):
    local: dict = {}
    for name, arg in script:
        yield (INV, name, arg)
        result = yield from machine.run(name, pid, arg, local)
        yield (RES, name, result)


class _Explorer:
    def __init__(self, machine, scripts, budget, on_step) -> None:
        self.machine = machine
        self.scripts = [list(s) for s in scripts]
        self.budget = budget
        self.on_step = on_step
        self.pending_cache: dict = {}
        self.memo: dict = {}
        self.result = ExploreResult()

    def pending(self, pid: int, results: tuple):
        key = (pid, results)
        instr = self.pending_cache.get(key)
        if instr is None:
            gen = _process(self.machine, pid, self.scripts[pid])
            try:
                instr = next(gen)
                for r in results:
                    instr = gen.send(r)
            except StopIteration:
                instr = _DONE
            self.pending_cache[key] = instr
        return instr

    def successors(self, state):
        mem, procs, hist = state
        for pid, (results, steps) in enumerate(procs):
            instr = self.pending(pid, results)
            if instr is _DONE:
                continue
            events = []
            if instr[0] == INV:
                events.append((pid, INV, instr[1], instr[2]))
                results += (None,)
                steps = 0
                instr = self.pending(pid, results)
            yield from self._resolve(state, pid, results, steps, instr, events)

    def _resolve(self, state, pid, results, steps, instr, events):
        while instr[0] == "choose":
            if instr[1] > 1:
                for v in range(instr[1]):
                    nxt = self.pending(pid, results + (v,))
                    yield from self._resolve(state, pid, results + (v,), steps, nxt, list(events))
                return
            results += (0,)
            instr = self.pending(pid, results)
        mem, procs, hist = state
        memory = dict(mem)
        op, addr = instr[0], instr[1]
        cur = memory.get(addr, default_value(addr))
        if op == "read":
            r = cur
        elif op == "write":
            memory[addr] = instr[2]
            r = None
        elif op == "cas":
            r = cur == instr[2]
            if r:
                memory[addr] = instr[3]
        elif op == "fai":
            r = cur
            memory[addr] = cur + 1
        elif op == "swap":
            r = cur
            memory[addr] = instr[2]
        else:
            raise ValueError(f"unknown instruction {instr!r}")
        if self.on_step is not None:
            self.on_step(pid, instr, mem, r)
        results += (r,)
        steps += 1
        after = self.pending(pid, results)
        if after[0] == RES:
            events.append((pid, RES, after[1], after[2]))
            name = after[1]
            if steps > self.result.max_steps.get(name, 0):
                self.result.max_steps[name] = steps
            results += (None,)
        new_procs = procs[:pid] + ((results, steps),) + procs[pid + 1:]
        yield (frozenset(memory.items()), new_procs, hist + tuple(events))

    def count(self, state) -> int:
        # iterative DFS keeps deep queue explorations off the C stack
        memo = self.memo
        if state in memo:
            return memo[state]
        stack = [(state, None)]
        while stack:
            node, children = stack[-1]
            if children is None:
                if node in memo:
                    stack.pop()
                    continue
                if len(memo) >= self.budget:
                    raise BudgetExceeded(f"state budget of {self.budget} exhausted")
                children = list(self.successors(node))
                stack[-1] = (node, children)
                if not children:
                    self.result.histories.add(node[2])
                    memo[node] = 1
                    stack.pop()
                    continue
                for c in children:
                    if c not in memo:
                        stack.append((c, None))
                continue
            memo[node] = sum(memo[c] for c in children)
            stack.pop()
        return memo[state]


def explore(
    machine: Machine,
    scripts: Sequence[Sequence[tuple[str, object]]],
    *,
    budget: int = DEFAULT_BUDGET,
    on_step: Callable | None = None,
) -> ExploreResult:
    """Enumerate all interleavings of ``scripts`` (one op list per process).

    ``on_step(pid, instr, memory_before, result)`` is called for every
    distinct transition. Raises :class:`BudgetExceeded` once more than
    ``budget`` states have been visited.
    """
    ex = _Explorer(machine, scripts, budget, on_step)
    init = (frozenset(), tuple(((), 0) for _ in scripts), ())
    ex.result.interleavings = ex.count(init)
    ex.result.states = len(ex.memo)
    return ex.result


@dataclass
class CheckSummary:
    algorithm: str
    histories: int = 0
    interleavings: int = 0
    states: int = 0
    failures: list = field(default_factory=list)
    max_steps: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def explore_and_check(
    machine: Machine,
    workloads,
    *,
    budget: int = DEFAULT_BUDGET,
    on_step: Callable | None = None,
) -> CheckSummary:
    """Explore each workload and run the oracle on every distinct history."""
    summary = CheckSummary(machine.name)
    model = machine.model()
    for scripts in workloads:
        res = explore(machine, scripts, budget=budget, on_step=on_step)
        summary.interleavings += res.interleavings
        summary.states += res.states
        for name, s in res.max_steps.items():
            summary.max_steps[name] = max(s, summary.max_steps.get(name, 0))
        for events in res.histories:
            summary.histories += 1
            verdict: LinearizeResult = linearize(to_history(events), model)
            if not verdict:
                summary.failures.append(events)
    return summary

