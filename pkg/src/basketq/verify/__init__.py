"""History recording, violation checkers, linearizability oracle and explorer."""

from .checkers import (
    KINDS,
    VFRESH,
    VORD,
    VREPEAT,
    VWIT,
    ViolationReport,
    check_all,
    check_vfresh,
    check_vord,
    check_vrepeat,
    check_vwit,
    confirm,
)
from .explore import BudgetExceeded, ExploreResult, explore, explore_and_check, to_history
from .history import History, HistoryEvent, Operation, Recorder, RecordingQueue
from .linearize import (
    BasketModel,
    HistoryTooLarge,
    LinearizeResult,
    LLICModel,
    QueueModel,
    linearize,
    model_by_name,
)
from .machines import ALGORITHMS, make_machine, workloads

__all__ = [
    "ALGORITHMS",
    "BasketModel",
    "BudgetExceeded",
    "ExploreResult",
    "History",
    "HistoryEvent",
    "HistoryTooLarge",
    "KINDS",
    "LLICModel",
    "LinearizeResult",
    "Operation",
    "QueueModel",
    "Recorder",
    "RecordingQueue",
    "VFRESH",
    "VORD",
    "VREPEAT",
    "VWIT",
    "ViolationReport",
    "check_all",
    "check_vfresh",
    "check_vord",
    "check_vrepeat",
    "check_vwit",
    "confirm",
    "explore",
    "explore_and_check",
    "linearize",
    "make_machine",
    "model_by_name",
    "to_history",
    "workloads",
]
