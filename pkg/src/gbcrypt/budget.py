"""Operation and wall-clock caps shared by the long-running algorithms."""

from __future__ import annotations

import time

from .errors import BudgetExceeded


class Budget:
    """Counts work units and checks an optional deadline.

    ``ops`` caps the number of :meth:`tick` units, ``ms`` caps wall time.
    Either may be None for no limit.
    """

    def __init__(self, ops: int | None = None, ms: float | None = None):
        self.ops = ops
        self.used = 0
        self.deadline = None if ms is None else time.monotonic() + ms / 1000.0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.ops is not None and self.used > self.ops:
            raise BudgetExceeded(f"operation cap {self.ops} exceeded")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exceeded")


def unlimited() -> Budget:
    return Budget()
