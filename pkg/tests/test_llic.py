import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basketq import OK, CasLLIC, FaiCounter, LLICSpec, LLICSpecState, MixedLLIC, RwLLIC, UsageError
from basketq.llic import make_llic
from basketq.process import ProcessGroup, ProcessHandle
from basketq.verify.explore import explore
from basketq.verify.machines import make_machine

IMPLS = ["cas", "rw", "mixed", "spec"]


def handles(n, seed=0):
    return ProcessGroup(n, seed).register_all()


@pytest.mark.parametrize("kind", IMPLS)
def test_fresh_object_reads_zero(kind):
    obj = make_llic(kind, 3)
    (h, *_) = handles(3)
    assert obj.ll(h) == 0


@pytest.mark.parametrize("kind", IMPLS)
def test_solo_ll_ic_increments(kind):
    obj = make_llic(kind, 3)
    h = handles(3)[0]
    for expected in range(5):
        assert obj.ll(h) == expected
        assert obj.ic(h) is OK
    assert obj.peek() == 5


@pytest.mark.parametrize("kind", IMPLS)
def test_stale_ic_is_a_no_op(kind):
    obj = make_llic(kind, 3)
    p, q, _ = handles(3)
    assert obj.ll(p) == 0
    assert obj.ll(q) == 0
    obj.ic(q)
    obj.ic(p)  # R moved since p's link
    assert obj.ll(p) == 1


@pytest.mark.parametrize("kind", IMPLS)
def test_second_ic_on_same_link_does_nothing(kind):
    obj = make_llic(kind, 2)
    h = handles(2)[0]
    obj.ll(h)
    obj.ic(h)
    obj.ic(h)
    assert obj.peek() == 1


@pytest.mark.parametrize("kind", IMPLS)
def test_ic_before_ll_is_usage_error(kind):
    obj = make_llic(kind, 2)
    with pytest.raises(UsageError):
        obj.ic(handles(2)[0])


@pytest.mark.parametrize("kind", IMPLS)
def test_foreign_handle_rejected(kind):
    obj = make_llic(kind, 2)
    with pytest.raises(UsageError):
        obj.ll(ProcessHandle(5))
    with pytest.raises(UsageError):
        obj.ll("not a handle")


def test_group_refuses_extra_registration():
    g = ProcessGroup(2)
    g.register_all()
    with pytest.raises(UsageError):
        g.register()


def test_mixed_needs_two_cells():
    with pytest.raises(ValueError):
        MixedLLIC(3, k=1)
    with pytest.raises(ValueError):
        make_llic("nope", 2)


def test_spec_state_transitions():
    s = LLICSpecState()
    v, s = s.ll(0)
    assert v == 0
    s = s.ic(0)
    assert s.r == 1
    assert s.ic(0).r == 1  # stale link
    with pytest.raises(UsageError):
        s.ic(7)


@pytest.mark.parametrize("kind,ll_bound,ic_bound", [("cas", 1, 2), ("rw", 3, 4), ("mixed", 2, 4)])
def test_step_bounds(kind, ll_bound, ic_bound):
    obj = make_llic(kind, 3, k=2)
    hs = handles(3, seed=3)
    for rnd in range(200):
        h = hs[rnd % 3]
        h.steps = 0
        obj.ll(h)
        assert h.steps <= ll_bound
        h.steps = 0
        obj.ic(h)
        assert h.steps <= ic_bound


@pytest.mark.parametrize("pad", [False, True])
def test_padding_does_not_change_semantics(pad):
    for obj in (RwLLIC(4, pad=pad), MixedLLIC(4, k=3, pad=pad)):
        h = handles(4)[2]
        for _ in range(10):
            obj.ll(h)
            obj.ic(h)
        assert obj.peek() == 10


def test_mixed_picks_only_other_cells():
    obj = MixedLLIC(1, k=4)
    h = handles(1, seed=11)[0]
    seen = set()
    for _ in range(200):
        before = obj.cells.snapshot()
        obj.ll(h)
        ind = before.index(max(before))
        obj.ic(h)
        after = obj.cells.snapshot()
        changed = [i for i in range(4) if after[i] != before[i]]
        assert len(changed) == 1
        assert changed[0] != ind
        seen.add(changed[0])
    assert len(seen) >= 3


@settings(max_examples=60, deadline=None)
@given(kind=st.sampled_from(["cas", "rw", "mixed"]),
       script=st.lists(st.tuples(st.integers(0, 2), st.sampled_from(["ll", "ic"])), max_size=60))
def test_sequential_matches_spec(kind, script):
    impl, spec = make_llic(kind, 3), LLICSpec(3)
    hi, hs = handles(3), handles(3)
    for pid, op in script:
        if op == "ll":
            assert impl.ll(hi[pid]) == spec.ll(hs[pid])
        elif spec_linked(spec, hs[pid]):
            impl.ic(hi[pid])
            spec.ic(hs[pid])
    assert impl.peek() == spec.peek()


def spec_linked(spec, h):
    return spec in h.locals


@pytest.mark.parametrize("algo", ["cas-llic", "rw-llic", "mixed-llic"])
def test_writes_never_skip_a_value(algo):
    # every stored value is at most one above the largest value present before
    machine = make_machine(algo, n=3, k=2)
    bad = []

    def on_step(pid, instr, mem, result):
        before = max([v for _, v in mem] or [0])
        if instr[0] == "write":
            new = instr[2]
        elif instr[0] == "cas" and result:
            new = instr[3]
        else:
            return
        if new > before + 1:
            bad.append((pid, instr, dict(mem)))

    explore(machine, [[("ll", None), ("ic", None), ("ll", None)]] * 2, on_step=on_step)
    assert bad == []


@pytest.mark.parametrize("algo", ["cas-llic", "rw-llic", "mixed-llic"])
def test_abstract_value_is_monotone(algo):
    machine = make_machine(algo, n=3, k=2)
    drops = []

    def on_step(pid, instr, mem, result):
        if instr[0] in ("write", "cas"):
            after = dict(mem)
            if instr[0] == "write":
                after[instr[1]] = instr[2]
            elif result:
                after[instr[1]] = instr[3]
            if max(after.values(), default=0) < max([v for _, v in mem] or [0]):
                drops.append(instr)

    explore(machine, [[("ll", None), ("ic", None)]] * 3, on_step=on_step)
    assert drops == []


@pytest.mark.parametrize("kind", ["cas", "rw", "mixed"])
def test_threaded_bounds(kind):
    n, ops = 4, 2000
    obj = make_llic(kind, n)
    hs = handles(n, seed=5)

    def work(h):
        for _ in range(ops):
            obj.ll(h)
            obj.ic(h)

    ts = [threading.Thread(target=work, args=(h,)) for h in hs]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert ops <= obj.peek() <= n * ops


def test_fai_counter_exact():
    c = FaiCounter(4)
    ts = [threading.Thread(target=lambda: [c.fai() for _ in range(1000)]) for _ in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert c.peek() == 4000


def test_cas_uses_single_register():
    assert CasLLIC(8).cells.size == 1
