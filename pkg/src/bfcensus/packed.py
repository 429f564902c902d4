"""Array kernels over packed truth tables.

Up to six variables a table fits one ``uint64`` and a set of functions is a
1-D ``uint64`` array of right-aligned table values.  Beyond six variables each
function is a row of ``2**n // 64`` words, most significant word first, so
row-lexicographic order is still truth-table order.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

import numpy as np

from .bfcore import BoolFn, table_mask

WORD = 64
SINGLE_WORD_MAX_N = 6


def n_words(n: int) -> int:
    return 1 if n <= SINGLE_WORD_MAX_N else (1 << n) // WORD


def record_bytes(n: int) -> int:
    return max(1, (1 << n) // 8)


def empty(n: int) -> np.ndarray:
    if n <= SINGLE_WORD_MAX_N:
        return np.empty(0, dtype=np.uint64)
    return np.empty((0, n_words(n)), dtype=np.uint64)


def as_words(items: np.ndarray) -> np.ndarray:
    return items.reshape(len(items), -1) if items.ndim == 1 else items


def from_words(words: np.ndarray, n: int) -> np.ndarray:
    return words[:, 0] if n <= SINGLE_WORD_MAX_N else words


def from_boolfns(fns, n: int) -> np.ndarray:
    fns = list(fns)
    if n <= SINGLE_WORD_MAX_N:
        return np.array([f.table for f in fns], dtype=np.uint64)
    w = n_words(n)
    out = np.empty((len(fns), w), dtype=np.uint64)
    word_mask = (1 << WORD) - 1
    for r, f in enumerate(fns):
        t = f.table
        for c in range(w - 1, -1, -1):
            out[r, c] = t & word_mask
            t >>= WORD
    return out


def to_int(row) -> int:
    if np.ndim(row) == 0:
        return int(row)
    v = 0
    for word in row:
        v = (v << WORD) | int(word)
    return v


def to_boolfn(items: np.ndarray, n: int, i: int) -> BoolFn:
    return BoolFn(n, to_int(items[i]))


def sort_order(items: np.ndarray) -> np.ndarray:
    if items.ndim == 1:
        return np.argsort(items, kind="stable")
    return np.lexsort(items.T[::-1])


def sort_unique(items: np.ndarray) -> np.ndarray:
    if items.ndim == 1:
        return np.unique(items)
    if len(items) == 0:
        return items.copy()
    s = items[sort_order(items)]
    keep = np.ones(len(s), dtype=bool)
    keep[1:] = np.any(s[1:] != s[:-1], axis=1)
    return s[keep]


def row_less(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise ``a < b`` in table order; works on 1-D or row arrays."""
    if a.ndim == 1:
        return a < b
    lt = np.zeros(len(a), dtype=bool)
    decided = np.zeros(len(a), dtype=bool)
    for c in range(a.shape[1]):
        lt |= ~decided & (a[:, c] < b[:, c])
        decided |= a[:, c] != b[:, c]
    return lt


def strictly_sorted(items: np.ndarray) -> bool:
    if len(items) < 2:
        return True
    return bool(np.all(row_less(items[:-1], items[1:])))


def weights(items: np.ndarray) -> np.ndarray:
    w = np.bitwise_count(items).astype(np.int64)
    return w if w.ndim == 1 else w.sum(axis=1)


def leq_mask(g, items: np.ndarray) -> np.ndarray:
    """``g <= h`` for every ``h`` in ``items`` (``g`` a scalar or a row)."""
    if items.ndim == 1:
        return (np.uint64(g) & ~items) == 0
    return np.all((np.asarray(g, dtype=np.uint64) & ~items) == 0, axis=1)


def geq_mask(g, items: np.ndarray) -> np.ndarray:
    if items.ndim == 1:
        return (items & ~np.uint64(g)) == 0
    return np.all((items & ~np.asarray(g, dtype=np.uint64)) == 0, axis=1)


def concat_rows(g, items: np.ndarray, n: int) -> np.ndarray:
    """``g || h`` for each ``h`` in ``items``; inputs have ``n`` variables."""
    if n + 1 <= SINGLE_WORD_MAX_N:
        return (np.uint64(g) << np.uint64(1 << n)) | items
    hi = np.broadcast_to(np.asarray(g, dtype=np.uint64).reshape(1, -1), (len(items), n_words(n)))
    return np.hstack([hi, as_words(items)])


# -- per-variable masks ---------------------------------------------------------

@lru_cache(maxsize=None)
def var_strides(n: int) -> tuple[tuple[np.uint64, np.uint64], ...]:
    from .bfcore import var_masks
    return tuple((np.uint64(s), np.uint64(upper)) for s, upper in var_masks(n))


def _halves(items: np.ndarray, n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Entries with ``x_i = 0`` and their ``x_i = 1`` partners, aligned."""
    s = 1 << (n - 1 - i)
    if items.ndim == 1:
        s, upper = var_strides(n)[i]
        return (items >> s) & upper, items & upper
    if s >= WORD:
        ws = s // WORD
        k = np.arange(items.shape[1])
        zero = k[(k & ws) == 0]
        return items[:, zero], items[:, zero + ws]
    # in-word variable: same layout as a 6-variable table
    s, upper = var_strides(SINGLE_WORD_MAX_N)[SINGLE_WORD_MAX_N - (n - i)]
    return (items >> s) & upper, items & upper


def direction_masks(items: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(inc, dec)`` bit masks, ``x_1`` in the top bit of ``n``."""
    inc = np.zeros(len(items), dtype=np.uint16)
    dec = np.zeros(len(items), dtype=np.uint16)
    for i in range(n):
        lo, hi = _halves(items, n, i)
        up, down = (lo & ~hi) == 0, (hi & ~lo) == 0
        if items.ndim != 1:
            up, down = up.all(axis=1), down.all(axis=1)
        bit = np.uint16(1 << (n - 1 - i))
        inc |= np.where(up, bit, np.uint16(0)).astype(np.uint16)
        dec |= np.where(down, bit, np.uint16(0)).astype(np.uint16)
    return inc, dec


def nondegenerate_mask(items: np.ndarray, n: int) -> np.ndarray:
    if items.ndim != 1:
        inc, dec = direction_masks(items, n)
        return (inc & dec) == 0
    ok = np.ones(len(items), dtype=bool)
    for s, upper in var_strides(n):
        ok &= (((items >> s) ^ items) & upper) != 0
    return ok


# -- variable permutations ---------------------------------------------------

def adjacent_swaps(n: int) -> list[int]:
    """Plain-changes sequence: swapping positions ``k, k+1`` in order visits all ``n!`` orders."""
    if n < 2:
        return []
    perm = list(range(n))
    direction = [-1] * n
    out = []
    while True:
        mobile = -1
        for idx, v in enumerate(perm):
            j = idx + direction[v]
            if 0 <= j < n and perm[j] < v and v > mobile:
                mobile, pos = v, idx
        if mobile < 0:
            return out
        j = pos + direction[mobile]
        perm[pos], perm[j] = perm[j], perm[pos]
        out.append(min(pos, j))
        for v in range(mobile + 1, n):
            direction[v] = -direction[v]


@lru_cache(maxsize=None)
def swap_mask(n: int, k: int) -> tuple[np.uint64, np.uint64]:
    """Delta-swap mask and distance exchanging variables ``x_{k+1}`` and ``x_{k+2}``."""
    a, b = n - 1 - k, n - 2 - k
    length = 1 << n
    m = 0
    for j in range(length):
        if (j >> a) & 1 and not (j >> b) & 1:
            m |= 1 << (length - 1 - j)
    return np.uint64(m), np.uint64(1 << b)


def swap_adjacent(items: np.ndarray, n: int, k: int) -> np.ndarray:
    m, d = swap_mask(n, k)
    t = ((items >> d) ^ items) & m
    return items ^ t ^ (t << d)


def orbit_images(items: np.ndarray, n: int) -> Iterator[np.ndarray]:
    """Yield ``f^pi`` for every variable permutation, identity first.

    Only single-word tables take the delta-swap path; wider tables are
    reindexed through explicit permutation tables.
    """
    if n <= SINGLE_WORD_MAX_N:
        x = items
        yield x
        for k in adjacent_swaps(n):
            x = swap_adjacent(x, n, k)
            yield x
        return
    from itertools import permutations
    from .equiv import build_perm_index
    for pi in permutations(range(1, n + 1)):
        yield reindex(items, n, build_perm_index(pi, n).table)


def reindex(items: np.ndarray, n: int, table: np.ndarray) -> np.ndarray:
    """Bit ``i`` of each output is bit ``table[i]`` of the input."""
    words = as_words(items)
    be = words.astype(">u8").view(np.uint8).reshape(len(words), -1)
    bits = np.unpackbits(be, axis=1)[:, -(1 << n):]
    moved = bits[:, table]
    pad = (-moved.shape[1]) % WORD
    if pad:
        moved = np.hstack([np.zeros((len(moved), pad), dtype=np.uint8), moved])
    packed = np.packbits(moved, axis=1).view(">u8").astype(np.uint64)
    return from_words(packed, n)


# -- byte records -------------------------------------------------------------

def to_records(items: np.ndarray, n: int) -> np.ndarray:
    """Pack into ``(count, record_bytes(n))`` uint8, ``f_0`` in the top bit of byte 0."""
    words = as_words(items)
    if n < 3:
        words = words << np.uint64(8 - (1 << n))
    be = words.astype(">u8").view(np.uint8).reshape(len(words), -1)
    return np.ascontiguousarray(be[:, -record_bytes(n):])


def from_records(records: np.ndarray, n: int) -> np.ndarray:
    rb = record_bytes(n)
    records = records.reshape(-1, rb)
    width = 8 * n_words(n)
    full = np.zeros((len(records), width), dtype=np.uint8)
    full[:, width - rb:] = records
    words = full.view(">u8").astype(np.uint64)
    if n < 3:
        words = words >> np.uint64(8 - (1 << n))
    return from_words(words, n)


def all_tables(n: int) -> np.ndarray:
    return np.arange(table_mask(n) + 1, dtype=np.uint64)
