"""Generators for monotone, balanced monotone and unate functions.

Every generator extends ``n``-variable functions ``g, h`` to ``g || h``.
The outer loop runs over ``g`` in table order and the inner survivors come
out in table order too, so concatenating shard outputs in shard order gives a
sorted result without a merge.  Shard boundaries depend only on the input,
never on the thread count.
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import packed
from .bfcore import SIG_O, SIG_Z, BoolFn, Signature
from .sets import FunctionSet, Origin
from .transforms import DEDEKIND

Progress = Callable[[int, int], None]

# Largest n each generator runs without allow_large.
LIMITS = {
    Origin.MONOTONE: 6,
    Origin.BALANCED_MONOTONE: 6,
    Origin.UNATE: 5,
}
HARD_LIMITS = {
    Origin.MONOTONE: 8,
    Origin.BALANCED_MONOTONE: 7,
    Origin.UNATE: 6,
}
SHARD = 512


class ResourceLimitExceeded(RuntimeError):
    pass


def _guard(origin: Origin, n: int, allow_large: bool, low: int = 0) -> None:
    if n < low or n > HARD_LIMITS[origin]:
        raise ValueError(f"{origin.value} generation supports {low} <= n <= {HARD_LIMITS[origin]}, got {n}")
    if n > LIMITS[origin] and not allow_large:
        raise ResourceLimitExceeded(
            f"{origin.value} generation at n={n} is a long run; pass allow_large=True")


def _shards(total: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + SHARD, total)) for lo in range(0, total, SHARD)]


def _run_shards(total: int, kernel, threads: int, progress: Progress | None) -> list:
    shards = _shards(total)
    if threads > 1 and len(shards) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda s: kernel(*s), shards))
    else:
        results = [kernel(*s) for s in shards]
    if progress is not None:
        pairs = emitted = 0
        for r in results:
            pairs += r[0]
            emitted += r[1]
            progress(pairs, emitted)
    return results


# -- monotone ---------------------------------------------------------------

def _monotone_step(prev: np.ndarray, m: int, threads: int, progress: Progress | None) -> np.ndarray:
    """All monotone ``g || h`` with ``g <= h`` from the complete ``m``-variable set."""

    def kernel(lo: int, hi: int):
        out = []
        pairs = 0
        for i in range(lo, hi):
            # g <= h bitwise forces g <= h numerically
            cand = prev[i:]
            pairs += len(prev)
            sel = cand[packed.leq_mask(prev[i], cand)]
            out.append(packed.concat_rows(prev[i], sel, m))
        chunk = np.concatenate(out) if out else packed.empty(m + 1)
        return pairs, len(chunk), chunk

    parts = _run_shards(len(prev), kernel, threads, progress)
    return np.concatenate([p[2] for p in parts]) if parts else packed.empty(m + 1)


def enumerate_monotone(n: int, *, allow_large: bool = False, threads: int = 1,
                       progress: Progress | None = None) -> FunctionSet:
    _guard(Origin.MONOTONE, n, allow_large)
    items = np.array([0, 1], dtype=np.uint64)
    for m in range(n):
        items = _monotone_step(items, m, threads, progress)
    return FunctionSet(n, items, Origin.MONOTONE, complete=True)


# -- weight buckets and filters ---------------------------------------------

@dataclass(frozen=True)
class WeightBuckets:
    n: int
    buckets: tuple[FunctionSet, ...]

    def sizes(self) -> list[int]:
        return [len(b) for b in self.buckets]

    def __getitem__(self, w: int) -> FunctionSet:
        return self.buckets[w]


def bucket_by_weight(s: FunctionSet) -> WeightBuckets:
    w = s.weights()
    return WeightBuckets(s.n, tuple(s.subset(w == k) for k in range((1 << s.n) + 1)))


def filter_balanced(s: FunctionSet) -> FunctionSet:
    origin = {Origin.MONOTONE: Origin.BALANCED_MONOTONE,
              Origin.UNATE: Origin.BALANCED_UNATE}.get(s.origin, s.origin)
    if s.n == 0:
        return FunctionSet.empty(0, origin)
    return s.subset(s.weights() == (1 << (s.n - 1)), origin)


def filter_nondegenerate(s: FunctionSet) -> FunctionSet:
    return s.subset(packed.nondegenerate_mask(s.items, s.n))


# -- balanced monotone ------------------------------------------------------

@dataclass(frozen=True)
class BucketPairing:
    """Output of the weight-bucket pairing step."""

    n: int
    count: int
    pairs: int
    functions: FunctionSet | None


def balanced_from_buckets(monotone: FunctionSet, *, count_only: bool = False, threads: int = 1,
                          progress: Progress | None = None) -> BucketPairing:
    """Balanced monotone functions of ``n + 1`` variables from all monotone ``n``-variable ones.

    ``g`` of weight ``w`` is paired only with ``h`` of weight ``2**n - w``.
    The input must be a complete monotone census: the output is not, so this
    step cannot be chained.
    """
    m = monotone.n
    if monotone.origin is not Origin.MONOTONE or not monotone.complete:
        raise ValueError("bucket pairing needs the complete monotone set, not a derived one")
    if m < len(DEDEKIND) and len(monotone) != DEDEKIND[m]:
        raise ValueError(f"expected {DEDEKIND[m]} monotone functions of {m} variables, got {len(monotone)}")
    buckets = bucket_by_weight(monotone)
    top = 1 << m
    total = 0
    pairs = 0
    chunks = []
    for w in range(top + 1):
        g_set, h_set = buckets[w].items, buckets[top - w].items
        if not len(g_set) or not len(h_set):
            continue

        def kernel(lo, hi, g_set=g_set, h_set=h_set):
            out = []
            hits = 0
            for i in range(lo, hi):
                mask = packed.leq_mask(g_set[i], h_set)
                if count_only:
                    hits += int(np.count_nonzero(mask))
                else:
                    out.append(packed.concat_rows(g_set[i], h_set[mask], m))
            if not count_only:
                chunk = np.concatenate(out) if out else packed.empty(m + 1)
                hits = len(chunk)
                return (hi - lo) * len(h_set), hits, chunk
            return (hi - lo) * len(h_set), hits, None

        for p, hits, chunk in _run_shards(len(g_set), kernel, threads, None):
            pairs += p
            total += hits
            if chunk is not None:
                chunks.append(chunk)
            if progress is not None:
                progress(pairs, total)
    fs = None
    if not count_only:
        allf = np.concatenate(chunks) if chunks else packed.empty(m + 1)
        fs = FunctionSet.from_unsorted(m + 1, allf, Origin.BALANCED_MONOTONE)
    return BucketPairing(m + 1, total, pairs, fs)


def enumerate_balanced_monotone(n: int, *, method: str = "auto", allow_large: bool = False,
                                threads: int = 1, progress: Progress | None = None) -> FunctionSet:
    """``method`` is ``"filter"`` (n <= 6), ``"buckets"`` (n >= 1) or ``"auto"``."""
    _guard(Origin.BALANCED_MONOTONE, n, allow_large, low=1)
    if method == "auto":
        method = "filter" if n <= 6 else "buckets"
    if method == "filter":
        if n > 6 and not allow_large:
            raise ResourceLimitExceeded("filtering needs every monotone function; use buckets")
        return filter_balanced(enumerate_monotone(n, allow_large=allow_large, threads=threads,
                                                  progress=progress))
    if method == "buckets":
        mon = enumerate_monotone(n - 1, threads=threads)
        return balanced_from_buckets(mon, threads=threads, progress=progress).functions
    raise ValueError(f"unknown method {method!r}")


def count_balanced_monotone(n: int, *, allow_large: bool = False, threads: int = 1,
                            progress: Progress | None = None) -> int:
    """Count without keeping the functions (bucket pairing)."""
    _guard(Origin.BALANCED_MONOTONE, n, allow_large, low=1)
    mon = enumerate_monotone(n - 1, threads=threads)
    return balanced_from_buckets(mon, count_only=True, threads=threads, progress=progress).count


# -- unate ------------------------------------------------------------------

@dataclass(frozen=True)
class SignedFunction:
    fn: BoolFn
    sig: Signature


def _sig_from_masks(table: int, n: int, inc: int) -> Signature:
    if table == 0:
        return SIG_Z
    if table == (1 << (1 << n)) - 1:
        return SIG_O
    return Signature.vec(format(inc, f"0{n}b"))


@dataclass(frozen=True)
class UnateSet(Sequence):
    """All unate functions of ``n`` variables with their direction masks.

    ``inc[i]`` / ``dec[i]`` have bit ``n - k`` set when function ``i`` is
    increasing / decreasing in ``x_k``; a variable the function ignores has
    both bits.  The signature is derived from ``inc``.
    """

    functions: FunctionSet
    inc: np.ndarray
    dec: np.ndarray

    @property
    def n(self) -> int:
        return self.functions.n

    def __len__(self) -> int:
        return len(self.functions)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        f = self.functions[i]
        return SignedFunction(f, _sig_from_masks(f.table, self.n, int(self.inc[i])))


def _unate_step(prev: UnateSet, threads: int, progress: Progress | None) -> UnateSet:
    m = prev.n
    items, inc, dec = prev.functions.items, prev.inc, prev.dec
    full = np.uint16((1 << m) - 1)
    key = (inc.astype(np.uint32) << np.uint32(16)) | dec
    partners: dict[int, np.ndarray] = {}
    for k in np.unique(key):
        ki, kd = np.uint16(int(k) >> 16), np.uint16(int(k) & 0xFFFF)
        # every variable needs a direction shared by both halves
        ok = ((ki & inc) | (kd & dec)) == full
        partners[int(k)] = np.flatnonzero(ok)
    top = np.uint16(1 << m)

    def kernel(lo: int, hi: int):
        outs, oinc, odec = [], [], []
        pairs = 0
        for i in range(lo, hi):
            idx = partners[int(key[i])]
            h = items[idx]
            pairs += len(items)
            le = packed.leq_mask(items[i], h)
            ge = packed.geq_mask(items[i], h)
            sel = le | ge
            outs.append(packed.concat_rows(items[i], h[sel], m))
            oinc.append(np.where(le[sel], top, np.uint16(0)) | (inc[i] & inc[idx[sel]]))
            odec.append(np.where(ge[sel], top, np.uint16(0)) | (dec[i] & dec[idx[sel]]))
        f = np.concatenate(outs)
        return pairs, len(f), (f, np.concatenate(oinc).astype(np.uint16),
                               np.concatenate(odec).astype(np.uint16))

    parts = [p[2] for p in _run_shards(len(items), kernel, threads, progress)]
    f = np.concatenate([p[0] for p in parts])
    fi = np.concatenate([p[1] for p in parts])
    fd = np.concatenate([p[2] for p in parts])
    if not packed.strictly_sorted(f):
        # distinct (g, h) give distinct g || h; this is the global dedup guard
        order = packed.sort_order(f)
        f, fi, fd = f[order], fi[order], fd[order]
        keep = np.ones(len(f), dtype=bool)
        keep[1:] = f[1:] != f[:-1]
        f, fi, fd = f[keep], fi[keep], fd[keep]
    return UnateSet(FunctionSet(m + 1, f, Origin.UNATE, complete=True), fi, fd)


def unate_base() -> UnateSet:
    """The four one-variable functions: 00 (z), 01 (1), 10 (0), 11 (o)."""
    f = np.array([0b00, 0b01, 0b10, 0b11], dtype=np.uint64)
    inc = np.array([1, 1, 0, 1], dtype=np.uint16)
    dec = np.array([1, 0, 1, 1], dtype=np.uint16)
    return UnateSet(FunctionSet(1, f, Origin.UNATE, complete=True), inc, dec)


def enumerate_unate(n: int, *, allow_large: bool = False, threads: int = 1,
                    progress: Progress | None = None) -> UnateSet:
    _guard(Origin.UNATE, n, allow_large)
    if n == 0:
        z = np.zeros(2, dtype=np.uint16)
        return UnateSet(FunctionSet(0, np.array([0, 1], dtype=np.uint64), Origin.UNATE, complete=True), z, z)
    s = unate_base()
    for _ in range(1, n):
        s = _unate_step(s, threads, progress)
    return s


def enumerate_class(name: str, n: int, *, allow_large: bool = False, threads: int = 1,
                    progress: Progress | None = None) -> FunctionSet:
    """Dispatch by class name: monotone, balanced-monotone, unate, balanced-unate."""
    if name == "monotone":
        return enumerate_monotone(n, allow_large=allow_large, threads=threads, progress=progress)
    if name == "balanced-monotone":
        if n == 0:
            return FunctionSet.empty(0, Origin.BALANCED_MONOTONE)
        return enumerate_balanced_monotone(n, allow_large=allow_large, threads=threads, progress=progress)
    if name == "unate":
        return enumerate_unate(n, allow_large=allow_large, threads=threads, progress=progress).functions
    if name == "balanced-unate":
        return filter_balanced(enumerate_unate(n, allow_large=allow_large, threads=threads,
                                               progress=progress).functions)
    raise ValueError(f"unknown class {name!r}")


__all__ = [
    "BucketPairing", "FunctionSet", "LIMITS", "Origin", "ResourceLimitExceeded", "SignedFunction",
    "UnateSet", "WeightBuckets", "balanced_from_buckets", "bucket_by_weight", "count_balanced_monotone",
    "enumerate_balanced_monotone", "enumerate_class", "enumerate_monotone", "enumerate_unate",
    "filter_balanced", "filter_nondegenerate", "unate_base",
]
