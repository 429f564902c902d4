"""The ``.fset`` file format: sorted function sets on disk.

Layout (all integers little-endian)::

    magic    6 bytes  b"BFSET\\0"
    version  1 byte   1
    n        1 byte
    flags    1 byte   bit 0 sorted, bit 1 has-signatures
    count    8 bytes  unsigned
    records  count x (table bytes [+ tag byte [+ alpha bytes]])

A table takes ``max(1, 2**n // 8)`` bytes, ``f_0`` in the top bit of the
first byte, so comparing records as byte strings orders them like tables.
Signature tags are 0 = z, 1 = o, 2 = vector; a vector is followed by
``ceil(n / 8)`` bytes holding ``alpha`` with ``alpha_1`` in the top bit.
"""

from __future__ import annotations

import heapq
import os
import shutil
import struct
import tempfile
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

import numpy as np

from . import packed
from .bfcore import SIG_O, SIG_Z, BoolFn, Signature, SigTag
from .sets import FunctionSet, Origin

MAGIC = b"BFSET\0"
VERSION = 1
HEADER = struct.Struct("<6sBBBQ")
FLAG_SORTED = 1
FLAG_SIGNATURES = 2
TMPDIR_ENV = "BFCENSUS_TMPDIR"
DEFAULT_RUN_BYTES = 256 << 20


class FsetError(ValueError):
    pass


class OrderError(FsetError):
    """Records out of order in a file that claims to be sorted."""


@dataclass(frozen=True)
class FsetHeader:
    n: int
    flags: int
    count: int

    @property
    def sorted(self) -> bool:
        return bool(self.flags & FLAG_SORTED)

    @property
    def has_signatures(self) -> bool:
        return bool(self.flags & FLAG_SIGNATURES)

    @property
    def table_bytes(self) -> int:
        return packed.record_bytes(self.n)

    def pack(self) -> bytes:
        return HEADER.pack(MAGIC, VERSION, self.n, self.flags, self.count)


def alpha_bytes(n: int) -> int:
    return (n + 7) // 8


def _encode_sig(sig: Signature, n: int) -> bytes:
    if sig.tag is SigTag.Z:
        return b"\0"
    if sig.tag is SigTag.O:
        return b"\1"
    k = alpha_bytes(n)
    v = int(sig.alpha, 2) << (8 * k - n) if n else 0
    return b"\2" + v.to_bytes(k, "big")


def _decode_sig(tag: int, raw: bytes, n: int) -> Signature:
    if tag == 0:
        return SIG_Z
    if tag == 1:
        return SIG_O
    if tag != 2:
        raise FsetError(f"bad signature tag {tag}")
    v = int.from_bytes(raw, "big") >> (8 * alpha_bytes(n) - n)
    return Signature.vec(format(v, f"0{n}b") if n else "")


def read_header(fh: BinaryIO) -> FsetHeader:
    raw = fh.read(HEADER.size)
    if len(raw) != HEADER.size:
        raise FsetError("truncated header")
    magic, version, n, flags, count = HEADER.unpack(raw)
    if magic != MAGIC:
        raise FsetError("not an .fset file")
    if version != VERSION:
        raise FsetError(f"unsupported .fset version {version}")
    if flags & ~(FLAG_SORTED | FLAG_SIGNATURES):
        raise FsetError(f"unknown flag bits {flags:#x}")
    return FsetHeader(n, flags, count)


def header_of(path: str | os.PathLike) -> FsetHeader:
    with open(path, "rb") as fh:
        return read_header(fh)


class FsetWriter:
    """Streaming writer; the record count is patched into the header on close."""

    def __init__(self, sink: str | os.PathLike | BinaryIO, n: int, *, sorted: bool = True,
                 signatures: bool = False):
        self._own = not hasattr(sink, "write")
        self._fh = open(sink, "wb") if self._own else sink
        self._start = self._fh.tell()
        self.n = n
        self.flags = (FLAG_SORTED if sorted else 0) | (FLAG_SIGNATURES if signatures else 0)
        self.count = 0
        self._last: bytes | None = None
        self._fh.write(FsetHeader(n, self.flags, 0).pack())

    def _check_order(self, first: bytes, last: bytes, inner_ok: bool) -> None:
        if not self.flags & FLAG_SORTED:
            return
        if not inner_ok or (self._last is not None and first <= self._last):
            raise OrderError("records are not strictly increasing")
        self._last = last

    def write_items(self, items: np.ndarray) -> None:
        if self.flags & FLAG_SIGNATURES:
            raise FsetError("this file carries signatures; use write_signed")
        if not len(items):
            return
        rec = packed.to_records(items, self.n)
        if self.flags & FLAG_SORTED:
            self._check_order(rec[0].tobytes(), rec[-1].tobytes(), packed.strictly_sorted(items))
        self._fh.write(rec.tobytes())
        self.count += len(rec)

    def write_record(self, record: bytes, sig: Signature | None = None) -> None:
        key = record[:packed.record_bytes(self.n)]
        self._check_order(key, key, True)
        self._fh.write(key)
        if self.flags & FLAG_SIGNATURES:
            if sig is None:
                raise FsetError("signature required")
            self._fh.write(_encode_sig(sig, self.n))
        self.count += 1

    def write_signed(self, fn: BoolFn, sig: Signature) -> None:
        rec = packed.to_records(packed.from_boolfns([fn], self.n), self.n)[0].tobytes()
        self.write_record(rec, sig)

    def close(self) -> FsetHeader:
        end = self._fh.tell()
        self._fh.seek(self._start)
        header = FsetHeader(self.n, self.flags, self.count)
        self._fh.write(header.pack())
        self._fh.seek(end)
        if self._own:
            self._fh.close()
        else:
            self._fh.flush()
        return header

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()
        elif self._own:
            self._fh.close()


def write_stream(sink, n: int, blocks: Iterable, *, sorted: bool = True) -> FsetHeader:
    """Write packed arrays (or FunctionSets) in order."""
    w = FsetWriter(sink, n, sorted=sorted)
    try:
        for b in blocks:
            w.write_items(b.items if isinstance(b, FunctionSet) else b)
    except BaseException:
        if w._own:
            w._fh.close()
        raise
    return w.close()


def write_set(path, s: FunctionSet) -> FsetHeader:
    return write_stream(path, s.n, [s.items], sorted=True)


def write_signed(path, n: int, signed: Iterable) -> FsetHeader:
    """Write ``SignedFunction``-like objects (``.fn`` and ``.sig``), sorted by function."""
    with FsetWriter(path, n, sorted=True, signatures=True) as w:
        for sf in signed:
            w.write_signed(sf.fn, sf.sig)
    return header_of(path)


def _iter_records(fh: BinaryIO, h: FsetHeader) -> Iterator[tuple[bytes, Signature | None]]:
    tb = h.table_bytes
    ab = alpha_bytes(h.n)
    read = fh.read
    for _ in range(h.count):
        key = read(tb)
        if len(key) != tb:
            raise FsetError("truncated record")
        sig = None
        if h.has_signatures:
            tag = read(1)
            if not tag:
                raise FsetError("truncated signature")
            raw = read(ab) if tag[0] == 2 else b""
            sig = _decode_sig(tag[0], raw, h.n)
        yield key, sig


def iter_records(path) -> Iterator[tuple[bytes, Signature | None]]:
    with open(path, "rb") as fh:
        h = read_header(fh)
        yield from _iter_records(fh, h)


def iter_blocks(path, block: int = 1 << 20) -> Iterator[np.ndarray]:
    """Packed arrays of at most ``block`` functions, in file order."""
    with open(path, "rb") as fh:
        h = read_header(fh)
        if h.has_signatures:
            batch: list[bytes] = []
            for key, _ in _iter_records(fh, h):
                batch.append(key)
                if len(batch) == block:
                    yield packed.from_records(np.frombuffer(b"".join(batch), dtype=np.uint8), h.n)
                    batch = []
            if batch:
                yield packed.from_records(np.frombuffer(b"".join(batch), dtype=np.uint8), h.n)
            return
        tb = h.table_bytes
        left = h.count
        while left:
            k = min(block, left)
            raw = fh.read(k * tb)
            if len(raw) != k * tb:
                raise FsetError("truncated record block")
            yield packed.from_records(np.frombuffer(raw, dtype=np.uint8), h.n)
            left -= k


def read_set(path, origin: Origin = Origin.UNKNOWN) -> FunctionSet:
    h = header_of(path)
    blocks = list(iter_blocks(path))
    items = np.concatenate(blocks) if blocks else packed.empty(h.n)
    if h.sorted:
        return FunctionSet(h.n, items, origin)
    return FunctionSet.from_unsorted(h.n, items, origin)


def read_signed(path) -> list[tuple[BoolFn, Signature]]:
    h = header_of(path)
    if not h.has_signatures:
        raise FsetError("file has no signatures")
    out = []
    for key, sig in iter_records(path):
        items = packed.from_records(np.frombuffer(key, dtype=np.uint8), h.n)
        out.append((packed.to_boolfn(items, h.n, 0), sig))
    return out


def merge_sorted(inputs: list, out) -> FsetHeader:
    """Sorted union of sorted files with duplicates removed (first copy wins)."""
    if not inputs:
        raise FsetError("nothing to merge")
    headers = [header_of(p) for p in inputs]
    n = headers[0].n
    if any(h.n != n for h in headers):
        raise FsetError("cannot merge sets of different n")
    sig = headers[0].has_signatures
    if any(h.has_signatures != sig for h in headers):
        raise FsetError("cannot merge files with and without signatures")
    if not all(h.sorted for h in headers):
        raise OrderError("merge inputs must be sorted")

    def keyed(i, p):
        prev = None
        for key, s in iter_records(p):
            if prev is not None and key <= prev:
                raise OrderError(f"{p} is not strictly increasing")
            prev = key
            yield key, i, s

    last = None
    with FsetWriter(out, n, sorted=True, signatures=sig) as w:
        for key, _, s in heapq.merge(*(keyed(i, p) for i, p in enumerate(inputs)),
                                     key=lambda t: (t[0], t[1])):
            if key == last:
                continue
            last = key
            w.write_record(key, s)
    return header_of(out)


def _scratch_dir(tmpdir) -> str | None:
    return os.fspath(tmpdir) if tmpdir else os.environ.get(TMPDIR_ENV) or None


def sort_stream(blocks: Iterable[np.ndarray], n: int, out, *, run_bytes: int = DEFAULT_RUN_BYTES,
                tmpdir=None) -> FsetHeader:
    """Sort and deduplicate a stream of packed arrays into ``out``.

    Input is buffered up to ``run_bytes``; each full buffer becomes a sorted
    run file and the runs are merged at the end.
    """
    per = packed.record_bytes(n)
    cap = max(1, run_bytes // max(per, 8))
    runs: list[str] = []
    buf: list[np.ndarray] = []
    held = 0
    scratch = _scratch_dir(tmpdir)

    def flush():
        nonlocal buf, held
        data = packed.sort_unique(np.concatenate(buf)) if buf else packed.empty(n)
        fd, path = tempfile.mkstemp(suffix=".fset", dir=scratch)
        os.close(fd)
        write_stream(path, n, [data])
        runs.append(path)
        buf, held = [], 0

    try:
        for b in blocks:
            buf.append(b)
            held += len(b)
            if held >= cap:
                flush()
        if not runs:
            data = packed.sort_unique(np.concatenate(buf)) if buf else packed.empty(n)
            return write_stream(out, n, [data])
        if buf:
            flush()
        return merge_sorted(runs, out)
    finally:
        for p in runs:
            os.unlink(p)


def external_sort(path, out, *, run_bytes: int = DEFAULT_RUN_BYTES, tmpdir=None) -> FsetHeader:
    h = header_of(path)
    if h.has_signatures:
        with tempfile.TemporaryDirectory(dir=_scratch_dir(tmpdir)) as d:
            recs = sorted(iter_records(path), key=lambda r: r[0])
            tmp = os.path.join(d, "sorted.fset")
            last = None
            with FsetWriter(tmp, h.n, sorted=True, signatures=True) as w:
                for key, s in recs:
                    if key != last:
                        w.write_record(key, s)
                        last = key
            shutil.move(tmp, out)
        return header_of(out)
    block = max(1, run_bytes // max(h.table_bytes, 8))
    return sort_stream(iter_blocks(path, block), h.n, out, run_bytes=run_bytes, tmpdir=tmpdir)

