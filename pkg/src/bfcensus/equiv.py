"""Equivalence of functions under permutation of the input variables."""

from __future__ import annotations

import bisect
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from . import packed
from .bfcore import BoolFn, DimensionError
from .sets import FunctionSet

BLOCK = 1 << 19


@dataclass(frozen=True)
class PermutationIndex:
    """Index map induced on truth-table positions by a variable permutation.

    ``perm`` is 1-based: ``perm[k - 1] = pi(k)``.  ``table[i]`` is the
    position whose bits are ``(i_{pi(1)}, ..., i_{pi(n)})``.
    """

    n: int
    perm: tuple[int, ...]
    table: np.ndarray

    def __eq__(self, other):
        return (isinstance(other, PermutationIndex) and self.n == other.n
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.perm))


def build_perm_index(pi: Sequence[int], n: int) -> PermutationIndex:
    pi = tuple(int(v) for v in pi)
    if len(pi) != n or sorted(pi) != list(range(1, n + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{n}")
    i = np.arange(1 << n, dtype=np.int64)
    j = np.zeros_like(i)
    for k in range(1, n + 1):
        src_bit = (i >> (n - pi[k - 1])) & 1
        j |= src_bit << (n - k)
    return PermutationIndex(n, pi, j)


def compose(p: PermutationIndex, q: PermutationIndex) -> PermutationIndex:
    """Index map equal to applying ``p`` and then ``q``."""
    if p.n != q.n:
        raise DimensionError("permutations act on different n")
    perm = tuple(q.perm[p.perm[k] - 1] for k in range(p.n))
    return PermutationIndex(p.n, perm, p.table[q.table])


@lru_cache(maxsize=16)
def all_perm_indices(n: int) -> tuple[PermutationIndex, ...]:
    """All ``n!`` index maps, permutations in lexicographic order."""
    return tuple(build_perm_index(pi, n) for pi in permutations(range(1, n + 1)))


def apply_perm(f: BoolFn, p: PermutationIndex) -> BoolFn:
    if f.n != p.n:
        raise DimensionError(f"function has {f.n} variables, permutation {p.n}")
    bits = f.bits
    return BoolFn.from_bits("".join(bits[k] for k in p.table)) if f.n else f


def canonical_form(f: BoolFn) -> BoolFn:
    """Smallest table in the permutation orbit of ``f``."""
    if f.n <= packed.SINGLE_WORD_MAX_N:
        x = np.array([f.table], dtype=np.uint64)
        best = min(int(img[0]) for img in packed.orbit_images(x, f.n))
        return BoolFn(f.n, best)
    return min(apply_perm(f, p) for p in all_perm_indices(f.n))


@dataclass(frozen=True)
class ClassCensus:
    representatives: FunctionSet
    class_count: int
    source_size: int

    def sidecar(self, prop: str) -> dict:
        return {"property": prop, "n": self.representatives.n,
                "classCount": self.class_count, "sourceSize": self.source_size}

    def save(self, path: str | os.PathLike, prop: str) -> None:
        from .store import write_set
        write_set(path, self.representatives)
        with open(f"{os.fspath(path)}.json", "w") as fh:
            json.dump(self.sidecar(prop), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _member(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    if len(t) == 0:
        return np.zeros(len(x), dtype=bool)
    pos = np.searchsorted(t, x)
    np.minimum(pos, len(t) - 1, out=pos)
    return t[pos] == x


def filter_classes_reference(s: FunctionSet) -> ClassCensus:
    """One function at a time: keep ``f`` unless some ``f^pi`` is already kept."""
    tables = all_perm_indices(s.n)
    kept: list[int] = []
    for f in s:
        images = (apply_perm(f, p).table for p in tables)
        hit = False
        for v in images:
            k = bisect.bisect_left(kept, v)
            if k < len(kept) and kept[k] == v:
                hit = True
                break
        if not hit:
            kept.append(f.table)
    reps = FunctionSet.from_functions((BoolFn(s.n, v) for v in kept), s.n, s.origin) if kept \
        else FunctionSet.empty(s.n, s.origin)
    return ClassCensus(reps, len(kept), len(s))


def filter_classes(s: FunctionSet, block: int = BLOCK) -> ClassCensus:
    """Representatives are the first member of each class in table order.

    The sorted list of kept functions is probed by binary search for every
    image ``f^pi``.  Work proceeds a block at a time: images of the whole block
    are probed together, with an element dropped at its first hit.  Survivors
    of a block are kept unless an earlier survivor of the same block lies in
    the same orbit, which is exactly the case where a one-at-a-time scan would
    have found it in the list.
    """
    n = s.n
    if n > packed.SINGLE_WORD_MAX_N:
        return filter_classes_reference(s)
    items = s.items
    kept = np.empty(0, dtype=np.uint64)
    swaps = packed.adjacent_swaps(n)
    for start in range(0, len(items), block):
        blk = items[start:start + block]
        alive = np.arange(len(blk))
        x = blk
        low = blk
        for step in range(len(swaps) + 1):
            if step:
                x = packed.swap_adjacent(x, n, swaps[step - 1])
            hit = _member(x, kept)
            if hit.any():
                miss = ~hit
                alive, x, low = alive[miss], x[miss], low[miss]
            low = np.minimum(low, x)
            if not len(alive):
                break
        _, first = np.unique(low, return_index=True)
        new = blk[np.sort(alive[first])]
        kept = np.concatenate([kept, new])
    reps = FunctionSet(n, kept, s.origin)
    return ClassCensus(reps, len(kept), len(s))


def canonical_forms(items: np.ndarray, n: int) -> np.ndarray:
    if n > packed.SINGLE_WORD_MAX_N:
        fns = (canonical_form(packed.to_boolfn(items, n, i)) for i in range(len(items)))
        return packed.from_boolfns(fns, n) if len(items) else packed.empty(n)
    low = items
    for img in packed.orbit_images(items, n):
        low = np.minimum(low, img)
    return low


def class_census_by_canonical(s: FunctionSet, threads: int = 1, block: int = BLOCK) -> ClassCensus:
    """Count distinct canonical forms; representatives are the orbit minima."""
    chunks = [s.items[i:i + block] for i in range(0, len(s.items), block)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            forms = list(pool.map(lambda c: canonical_forms(c, s.n), chunks))
    else:
        forms = [canonical_forms(c, s.n) for c in chunks]
    allf = np.concatenate(forms) if forms else packed.empty(s.n)
    reps = FunctionSet.from_unsorted(s.n, allf, s.origin)
    return ClassCensus(reps, len(reps), len(s))


def canonical_census_stream(blocks: Iterable[np.ndarray], n: int, out, *,
                            run_bytes: int | None = None, tmpdir=None):
    """Class count for sets that do not fit in memory.

    Each block is mapped to canonical forms, then external-sorted into
    ``out`` with duplicates dropped.  The returned header's count is the
    number of classes and ``out`` holds the representatives.
    """
    from . import store
    kw = {"tmpdir": tmpdir}
    if run_bytes is not None:
        kw["run_bytes"] = run_bytes
    return store.sort_stream((canonical_forms(b, n) for b in blocks), n, out, **kw)
