"""Modular baskets queue with LL/IC head/tail objects and K-baskets."""

from ._backend import BACKEND
from .basket import BOTTOM, TOP, BasketSpec, BasketSpecState, CasBasket, FaiSwapBasket
from .llic import CasLLIC, FaiCounter, LLICSpec, LLICSpecState, MixedLLIC, RwLLIC, make_llic
from .process import ProcessGroup, ProcessHandle, UsageError
from .queue import BasketsQueue, MutexQueue, SegmentedBasketArray
from .status import CLOSED, EMPTY, FULL, OK, Status

__all__ = [
    "BACKEND",
    "BOTTOM",
    "TOP",
    "BasketSpec",
    "BasketSpecState",
    "BasketsQueue",
    "CLOSED",
    "CasBasket",
    "CasLLIC",
    "EMPTY",
    "FULL",
    "FaiCounter",
    "FaiSwapBasket",
    "LLICSpec",
    "LLICSpecState",
    "MixedLLIC",
    "MutexQueue",
    "OK",
    "ProcessGroup",
    "ProcessHandle",
    "RwLLIC",
    "SegmentedBasketArray",
    "Status",
    "UsageError",
    "make_llic",
]
