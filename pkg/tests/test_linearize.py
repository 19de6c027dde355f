import pytest

from basketq import CLOSED, EMPTY, FULL, OK
from basketq.verify import BasketModel, History, HistoryTooLarge, LLICModel, QueueModel, linearize, model_by_name


def H(*ops):
    return History.from_ops(ops, obj="o")


CASES = [
    # (model, ops, linearizable)
    (QueueModel(), [(0, "enq", 1, OK, 0, 1), (1, "deq", None, 1, 2, 3)], True),
    (QueueModel(), [(0, "enq", 1, OK, 0, 1), (1, "deq", None, EMPTY, 2, 3)], False),
    (QueueModel(), [(0, "enq", 1, OK, 0, 3), (1, "deq", None, EMPTY, 1, 2)], True),
    (QueueModel(), [(0, "enq", 1, OK, 0, 1), (0, "enq", 2, OK, 2, 3),
                    (1, "deq", None, 2, 4, 5)], False),
    (QueueModel(), [(0, "enq", 1, OK, 0, 4), (1, "enq", 2, OK, 1, 2),
                    (2, "deq", None, 2, 5, 6), (2, "deq", None, 1, 7, 8)], True),
    (LLICModel(), [(0, "ll", None, 0, 0, 1), (0, "ic", None, OK, 2, 3), (1, "ll", None, 1, 4, 5)], True),
    (LLICModel(), [(0, "ll", None, 0, 0, 1), (0, "ic", None, OK, 2, 3), (1, "ll", None, 0, 4, 5)], False),
    (LLICModel(), [(0, "ll", None, 0, 0, 1), (1, "ll", None, 0, 0.5, 1.5), (0, "ic", None, OK, 2, 3),
                   (1, "ic", None, OK, 2.5, 3.5), (0, "ll", None, 2, 4, 5)], False),
    (LLICModel(), [(0, "ic", None, OK, 0, 1)], False),
    (BasketModel(2), [(0, "put", "a", OK, 0, 1), (1, "put", "b", OK, 2, 3), (2, "put", "c", OK, 4, 5)], False),
    (BasketModel(2), [(0, "put", "a", FULL, 0, 1), (1, "take", None, CLOSED, 2, 3)], True),
    (BasketModel(2), [(1, "take", None, CLOSED, 0, 1), (0, "put", "a", OK, 2, 3)], False),
    (BasketModel(2), [(1, "take", None, CLOSED, 0, 3), (0, "put", "a", OK, 1, 2)], False),
    (BasketModel(2), [(1, "take", None, "a", 0, 3), (0, "put", "a", OK, 1, 2)], True),
    (BasketModel(2), [(0, "put", "a", OK, 0, 1), (0, "put", "b", OK, 2, 3),
                      (1, "take", None, "b", 4, 5), (1, "take", None, "a", 6, 7)], True),
]


@pytest.mark.parametrize("model,ops,expected", CASES)
def test_oracle_table(model, ops, expected):
    res = linearize(H(*ops), model)
    assert res.linearizable is expected
    if expected:
        assert sorted(res.order) == list(range(len(ops)))


def test_witness_order_respects_real_time():
    h = H((0, "enq", 1, OK, 0, 1), (1, "enq", 2, OK, 2, 3), (2, "deq", None, 1, 4, 5))
    assert linearize(h, QueueModel()).order == (0, 1, 2)


def test_size_limit():
    ops = [(0, "enq", i, OK, 2 * i, 2 * i + 1) for i in range(20)]
    with pytest.raises(HistoryTooLarge):
        linearize(H(*ops), QueueModel())


def test_pending_rejected():
    with pytest.raises(ValueError):
        linearize(History.from_ops([(0, "enq", 1, None, 0, None)]), QueueModel())


def test_model_names():
    assert isinstance(model_by_name("llic"), LLICModel)
    assert model_by_name("basket:3").k == 3
    assert linearize(H((0, "enq", 1, OK, 0, 1)), "queue")
    with pytest.raises(ValueError):
        model_by_name("stack")
