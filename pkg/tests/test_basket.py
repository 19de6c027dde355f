import threading

import pytest

from basketq import BOTTOM, CLOSED, FULL, OK, TOP, BasketSpec, BasketSpecState, CasBasket, FaiSwapBasket
from basketq.basket import basket_factory
from basketq.process import ProcessGroup
from basketq.verify.explore import explore
from basketq.verify.machines import basket_workloads, make_machine


def handles(n, seed=0):
    return ProcessGroup(n, seed).register_all()


def test_fai_swap_capacity_two():
    b = FaiSwapBasket(2, 3)
    h = handles(3)
    assert [b.put(h[0], "a"), b.put(h[1], "b"), b.put(h[2], "c")] == [OK, OK, FULL]


def test_fai_swap_take_then_close():
    b = FaiSwapBasket(2)
    h = handles(2)
    b.put(h[0], "a")
    assert b.take(h[1]) == "a"
    assert b.take(h[1]) is CLOSED
    assert b.put(h[0], "z") is FULL


def test_empty_take_closes_for_good():
    for b in (FaiSwapBasket(2, 2), CasBasket(2)):
        h = handles(2)
        assert b.take(h[0]) is CLOSED
        assert b.take(h[1]) is CLOSED
        assert b.put(h[1], "late") is FULL


def test_cas_basket_one_cell_per_process():
    b = CasBasket(3)
    h = handles(3)
    assert b.put(h[1], "a") is OK
    assert b.put(h[1], "b") is FULL
    assert b.put(h[0], "c") is OK
    got = {b.take(h[2]), b.take(h[2])}
    assert got == {"a", "c"}
    assert b.take(h[2]) is CLOSED


def test_cas_basket_taker_prefers_own_cell():
    b = CasBasket(3)
    h = handles(3)
    for p in range(3):
        b.put(h[p], f"x{p}")
    assert b.take(h[2]) == "x2"


def test_reserved_values_rejected():
    b = FaiSwapBasket(2)
    h = handles(2)
    for bad in (BOTTOM, TOP, OK, CLOSED):
        with pytest.raises(ValueError):
            b.put(h[0], bad)


def test_spec_state_outcomes():
    s = BasketSpecState(2)
    assert [r for r, _ in s.put("a")] == [FULL, OK]
    s = s.put("a")[1][1].put("b")[1][1]
    assert [r for r, _ in s.put("c")] == [FULL]
    assert sorted(r for r, _ in s.take()) == ["a", "b"]
    empty = BasketSpecState(2)
    ((r, nxt),) = empty.take()
    assert r is CLOSED and nxt.closed


def test_spec_basket_is_oldest_first():
    b = BasketSpec(3)
    h = handles(3)
    for x in "abc":
        b.put(h[0], x)
    assert [b.take(h[1]) for _ in range(4)] == ["a", "b", "c", CLOSED]


def test_factory_kinds():
    assert isinstance(basket_factory("cas", 4)(), CasBasket)
    assert basket_factory("fai-swap", 4, 2)().k == 2
    with pytest.raises(ValueError):
        basket_factory("wat", 2)


@pytest.mark.parametrize("algo,put_bound,take_bound", [
    ("fai-swap-basket", 4 * 3, 4 * 3),  # K + 1 loop iterations of at most 4 steps
    ("cas-basket", 3, 3 * 5 + 1),
])
def test_step_bounds_exhaustive(algo, put_bound, take_bound):
    machine = make_machine(algo, n=2, k=2)
    steps = {}
    for scripts in basket_workloads(2):
        for name, s in explore(machine, scripts).max_steps.items():
            steps[name] = max(s, steps.get(name, 0))
    assert steps["put"] <= put_bound
    assert steps["take"] <= take_bound


def test_fai_swap_put_can_need_k_plus_one_rounds():
    # both slots cancelled by takes that then stall: a PUT retries past K tickets
    b = FaiSwapBasket(2, 3)
    h = handles(3)
    b.cells.swap(0, TOP)
    b.cells.swap(1, TOP)
    b.shared.store(FaiSwapBasket._TAKES, 2)
    h[0].steps = 0
    assert b.put(h[0], "x") is FULL
    assert h[0].steps <= 4 * 3


@pytest.mark.parametrize("make", [lambda n: FaiSwapBasket(n, n), CasBasket])
def test_threaded_put_take_conservation(make):
    n = 6
    for rnd in range(200):
        b = make(n)
        hs = handles(n, seed=rnd)
        got, puts = [], []

        def putter(h):
            if b.put(h, (h.pid, rnd)) is OK:
                puts.append((h.pid, rnd))

        def taker(h):
            x = b.take(h)
            if x is not CLOSED:
                got.append(x)

        ts = [threading.Thread(target=putter if p % 2 else taker, args=(hs[p],)) for p in range(n)]
        for t in ts:
            t.start()
        for t in ts:
            t.join()
        assert len(got) == len(set(got))
        assert set(got) <= set(puts)
        assert sorted(got + b.stored()) == sorted(puts)
