from math import comb

import pytest

from basketq import CLOSED, OK
from basketq.verify import BudgetExceeded, explore, explore_and_check, make_machine, to_history, workloads
from basketq.verify.linearize import SequentialModel
from basketq.verify.machines import ALGORITHMS, Machine


class Reader(Machine):
    """Each op reads one address ``k`` times; every schedule is distinct."""

    name = "reader"
    ops = ("look",)

    def __init__(self, k):
        super().__init__()
        self.k = k

    def look(self, pid, arg, local):
        for _ in range(self.k):
            yield ("read", self.addr("R"))
        return 0

    def model(self):
        return SequentialModel()


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_two_process_interleaving_count(k):
    res = explore(Reader(k), [[("look", None)], [("look", None)]])
    assert res.interleavings == comb(2 * k, k)


def test_three_process_multinomial():
    res = explore(Reader(2), [[("look", None)]] * 3)
    assert res.interleavings == 90  # 6! / (2! 2! 2!)


def test_single_process_has_one_schedule():
    res = explore(make_machine("rw-llic", n=3), [[("ll", None), ("ic", None), ("ll", None)]])
    assert res.interleavings == 1
    (events,) = res.histories
    assert [e[3] for e in events if e[1] == "res"][-1] == 1


def test_deterministic():
    m = make_machine("mixed-llic", n=3, k=2)
    a = explore(m, [[("ll", None), ("ic", None)]] * 2)
    b = explore(make_machine("mixed-llic", n=3, k=2), [[("ll", None), ("ic", None)]] * 2)
    assert a.histories == b.histories
    assert a.interleavings == b.interleavings


def test_budget():
    with pytest.raises(BudgetExceeded):
        explore(make_machine("rw-llic", n=3), [[("ll", None), ("ic", None)]] * 3, budget=50)


def test_choose_branches_every_option():
    # the CAS basket's taker visits other cells in random order; every order is explored
    m = make_machine("cas-basket", n=3)
    seen = set()

    def on_step(pid, instr, mem, result):
        cells = {a[1]: v for a, v in mem if a[0] == "A"}
        if instr[0] == "read" and instr[1][0] == "A" and list(cells) == [2]:
            seen.add(instr[1][1])  # first foreign cell tried after cancelling its own

    explore(m, [[], [], [("take", None)]], on_step=on_step)
    assert {0, 1} <= seen


def test_histories_convert_and_check():
    m = make_machine("cas-llic")
    res = explore(m, [[("ll", None), ("ic", None)]] * 2)
    hist = res.to_histories("o")
    assert len(hist) == len(res.histories)
    assert all(h.complete() for h in hist)


@pytest.mark.parametrize("algo", ["cas-llic", "rw-llic", "mixed-llic", "cas-basket"])
def test_small_instances_linearizable(algo):
    m = make_machine(algo, n=2, k=2)
    summary = explore_and_check(m, workloads(m, 2, 2))
    assert summary.ok, [to_history(f).dumps() for f in summary.failures[:1]]


@pytest.mark.parametrize("algo", [a for a in ALGORITHMS if a.startswith("queue-")])
def test_queue_machines_single_op(algo):
    m = make_machine(algo, n=2, k=2)
    summary = explore_and_check(m, workloads(m, 2, 1))
    assert summary.ok
    assert summary.histories > 0


def test_fai_swap_two_processes_linearizable():
    m = make_machine("fai-swap-basket", k=2)
    assert explore_and_check(m, workloads(m, 2, 1)).ok


def test_fai_swap_three_processes_counterexample():
    # a take that returns CLOSED after seeing TAKES == K does not wait for the
    # slower take holding ticket 0, so a later PUT can still land in slot 0
    m = make_machine("fai-swap-basket", k=2)
    scripts = [[("put", "x0")], [("take", None)], [("take", None)]]
    summary = explore_and_check(m, [scripts])
    assert not summary.ok
    for events in summary.failures:
        ops = to_history(events, "b").operations()
        put = next(o for o in ops if o.name == "put")
        assert put.result is OK
        assert any(o.result is CLOSED and o.precedes(put) for o in ops if o.name == "take")
