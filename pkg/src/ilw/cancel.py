"""Cooperative cancellation for the long-running searches.

Any object with an ``is_set()`` method works as a token; ``threading.Event``
is the intended one.
"""

from __future__ import annotations

from typing import Protocol


class CancelToken(Protocol):
    def is_set(self) -> bool: ...


class Cancelled(RuntimeError):
    pass


def checkpoint(cancel: CancelToken | None, counter: int = 0, every: int = 256) -> None:
    if cancel is not None and counter % every == 0 and cancel.is_set():
        raise Cancelled("operation cancelled")
