"""Sorted, duplicate-free collections of same-arity functions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import packed
from .bfcore import BoolFn, DimensionError


class Origin(enum.Enum):
    MONOTONE = "monotone"
    BALANCED_MONOTONE = "balanced-monotone"
    UNATE = "unate"
    BALANCED_UNATE = "balanced-unate"
    BRUTE_FORCE = "brute-force"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class FunctionSet:
    """Functions of ``n`` variables in strictly increasing table order.

    ``items`` is a packed array (see :mod:`bfcensus.packed`).  The
    constructor rejects unsorted or duplicated input; use
    :meth:`from_unsorted` when order is not already guaranteed.
    """

    n: int
    items: np.ndarray
    origin: Origin = Origin.UNKNOWN
    complete: bool = field(default=False, compare=False)

    def __post_init__(self):
        want = 1 if self.n <= packed.SINGLE_WORD_MAX_N else 2
        if self.items.ndim != want or self.items.dtype != np.uint64:
            raise DimensionError(f"items do not have the packed layout for n={self.n}")
        if not packed.strictly_sorted(self.items):
            raise ValueError("FunctionSet items must be strictly increasing")

    @classmethod
    def from_unsorted(cls, n: int, items: np.ndarray, origin: Origin = Origin.UNKNOWN) -> "FunctionSet":
        return cls(n, packed.sort_unique(items), origin)

    @classmethod
    def from_functions(cls, fns: Iterable[BoolFn], n: int | None = None,
                       origin: Origin = Origin.UNKNOWN) -> "FunctionSet":
        fns = list(fns)
        if n is None:
            if not fns:
                raise ValueError("n is required for an empty set")
            n = fns[0].n
        if any(f.n != n for f in fns):
            raise DimensionError("mixed variable counts")
        return cls.from_unsorted(n, packed.from_boolfns(fns, n), origin)

    @classmethod
    def empty(cls, n: int, origin: Origin = Origin.UNKNOWN) -> "FunctionSet":
        return cls(n, packed.empty(n), origin)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i: int) -> BoolFn:
        return packed.to_boolfn(self.items, self.n, i)

    def __iter__(self) -> Iterator[BoolFn]:
        for i in range(len(self.items)):
            yield self[i]

    def __contains__(self, f: BoolFn) -> bool:
        if f.n != self.n:
            return False
        key = packed.from_boolfns([f], self.n)
        if self.items.ndim == 1:
            i = int(np.searchsorted(self.items, key[0]))
            return i < len(self.items) and self.items[i] == key[0]
        return any(np.array_equal(row, key[0]) for row in self.items)

    def same_members(self, other: "FunctionSet") -> bool:
        return self.n == other.n and np.array_equal(self.items, other.items)

    def subset(self, mask: np.ndarray, origin: Origin | None = None) -> "FunctionSet":
        return FunctionSet(self.n, self.items[mask], origin or self.origin)

    def weights(self) -> np.ndarray:
        return packed.weights(self.items)

    def strings(self) -> list[str]:
        return [str(f) for f in self]
