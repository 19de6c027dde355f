"""Operation outcomes shared by baskets and the queue."""

from enum import Enum


class Status(Enum):
    OK = "OK"
    FULL = "FULL"
    CLOSED = "CLOSED"
    EMPTY = "EMPTY"

    def __repr__(self) -> str:
        return self.value


OK = Status.OK
FULL = Status.FULL
CLOSED = Status.CLOSED
EMPTY = Status.EMPTY
