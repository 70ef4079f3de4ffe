"""Memoized pull-based streams and the fuel discipline.

All lazily-described objects in this package (real-number names, set
enumerations, cover names) are built on :class:`Stream`.  A stream memoizes
every pulled element behind a lock, so concurrent readers observe a single
consistent prefix and validators only ever run once per index.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")


class Stream:
    """An infinite memoized sequence, pulled by index.

    The source is either a callable ``index -> value`` or an iterator.
    Elements are produced in order; an optional ``validate(index, prefix)``
    hook runs once when index ``i`` is first materialized (``prefix`` holds
    elements ``0..i``).
    """

    def __init__(self, source, validate: Callable[[int, list], None] | None = None):
        if callable(source):
            self._it = map(source, itertools.count())
        else:
            self._it = iter(source)
        self._memo: list = []
        self._validate = validate
        self._lock = threading.Lock()

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError("stream indices start at 0")
        with self._lock:
            while len(self._memo) <= n:
                try:
                    value = next(self._it)
                except StopIteration:
                    raise IndexError(
                        f"finite source exhausted at index {len(self._memo)}"
                    ) from None
                self._memo.append(value)
                if self._validate is not None:
                    self._validate(len(self._memo) - 1, self._memo)
        return self._memo[n]

    def prefix(self, n: int) -> list:
        """Elements ``0..n-1``."""
        if n > 0:
            self[n - 1]
        with self._lock:
            return list(self._memo[:n])

    @property
    def pulled(self) -> int:
        with self._lock:
            return len(self._memo)


def constant_stream(value) -> Stream:
    return Stream(lambda _n: value)


def interleave(*sources: Iterable) -> Iterator:
    """Round-robin over finitely many iterables, dropping exhausted ones."""
    iters = [iter(s) for s in sources]
    while iters:
        alive = []
        for it in iters:
            try:
                yield next(it)
            except StopIteration:
                continue
            alive.append(it)
        iters = alive


@dataclass(frozen=True)
class Fuel:
    """A budget of stream pulls for semi-decision procedures.

    Procedures taking fuel never diverge: they either certify an answer
    within ``budget`` pulls or report "undetermined".
    """

    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("fuel budget must be nonnegative")
