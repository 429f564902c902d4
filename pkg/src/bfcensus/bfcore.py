"""Truth-table Boolean functions.

A function of ``n`` variables is held as the integer whose binary expansion,
read over ``2**n`` digits, is the truth table ``f_0 f_1 ... f_{2^n - 1}``.
``f_0`` is therefore the most significant digit and numeric order coincides
with lexicographic order of the bit strings.  Input ``x = (x_1, ..., x_n)``
addresses entry ``int(x)`` with ``x_1`` as the most significant bit, so the
first half of a table is the ``x_1 = 0`` cofactor and :func:`concat` is plain
string concatenation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_VARS = 16


class DimensionError(ValueError):
    """Arguments disagree on the number of variables."""


class NotUnate(ValueError):
    """Raised by :func:`signature` for a function that is not unate."""


@lru_cache(maxsize=None)
def table_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def var_masks(n: int) -> tuple[tuple[int, int], ...]:
    """Per variable ``x_i`` the pair ``(stride, upper)``.

    ``upper`` selects the table positions holding the ``x_i = 1`` entries.
    Shifting the ``x_i = 0`` entries right by ``stride`` lines them up with
    their ``x_i = 1`` partners.
    """
    out = []
    for i in range(1, n + 1):
        s = 1 << (n - i)
        block = (1 << s) - 1
        reps = table_mask(n) // ((1 << (2 * s)) - 1)
        out.append((s, block * reps))
    return tuple(out)


def _as_bits(x: Sequence[int] | str | int, n: int) -> int:
    if isinstance(x, int):
        if not 0 <= x < (1 << n):
            raise DimensionError(f"input {x} out of range for n={n}")
        return x
    bits = [int(b) for b in x]
    if len(bits) != n:
        raise DimensionError(f"expected {n} input bits, got {len(bits)}")
    v = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        v = (v << 1) | b
    return v


@dataclass(frozen=True, order=True)
class BoolFn:
    """Immutable truth table of an ``n``-variable Boolean function."""

    n: int
    table: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VARS:
            raise ValueError(f"n must be in 0..{MAX_VARS}, got {self.n}")
        if not 0 <= self.table <= table_mask(self.n):
            raise ValueError("table does not fit in 2**n bits")

    @classmethod
    def from_bits(cls, bits: str | Iterable[int]) -> "BoolFn":
        s = bits if isinstance(bits, str) else "".join(str(int(b)) for b in bits)
        length = len(s)
        if length == 0 or length & (length - 1):
            raise ValueError(f"bit string length must be a power of two, got {length}")
        if set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(length.bit_length() - 1, int(s, 2))

    @classmethod
    def constant(cls, n: int, value: int) -> "BoolFn":
        return cls(n, table_mask(n) if value else 0)

    @property
    def size(self) -> int:
        return 1 << self.n

    def bit(self, i: int) -> int:
        """Value ``f_i``."""
        return (self.table >> (self.size - 1 - i)) & 1

    @property
    def bits(self) -> str:
        return format(self.table, f"0{self.size}b")

    def __str__(self) -> str:
        return format_boolfn(self)

    def __repr__(self) -> str:
        return f"BoolFn({format_boolfn(self)!r})"


def parse_boolfn(text: str, n: int | None = None) -> BoolFn:
    """Read a bit string such as ``"0001"`` or hex such as ``"0x0000ffff"``."""
    text = text.strip()
    if text.lower().startswith("0x"):
        digits = text[2:]
        if n is None:
            width = 4 * len(digits)
            if width & (width - 1) or width < 32:
                raise ValueError(f"hex form needs 2**n/4 digits with n >= 5: {text!r}")
            n = width.bit_length() - 1
        if 4 * len(digits) != 1 << n:
            raise DimensionError(f"{text!r} is not a {n}-variable table")
        return BoolFn(n, int(digits, 16))
    f = BoolFn.from_bits(text)
    if n is not None and f.n != n:
        raise DimensionError(f"{text!r} is not a {n}-variable table")
    return f


def format_boolfn(f: BoolFn) -> str:
    if f.n <= 4:
        return f.bits
    return "0x" + format(f.table, f"0{f.size // 4}x")


def _check_same(g: BoolFn, h: BoolFn) -> None:
    if g.n != h.n:
        raise DimensionError(f"variable counts differ: {g.n} != {h.n}")


def evaluate(f: BoolFn, x: Sequence[int] | str | int) -> int:
    return f.bit(_as_bits(x, f.n))


def weight(f: BoolFn) -> int:
    return f.table.bit_count()


def negate(f: BoolFn) -> BoolFn:
    return BoolFn(f.n, f.table ^ table_mask(f.n))


def reverse(f: BoolFn) -> BoolFn:
    """``f(~x_1, ..., ~x_n)``; the bit string read backwards."""
    return BoolFn(f.n, int(f.bits[::-1], 2))


def dual(f: BoolFn) -> BoolFn:
    return negate(reverse(f))


def concat(g: BoolFn, h: BoolFn) -> BoolFn:
    """``g || h``: ``g`` on ``x_1 = 0`` and ``h`` on ``x_1 = 1``."""
    _check_same(g, h)
    return BoolFn(g.n + 1, (g.table << g.size) | h.table)


def split(f: BoolFn) -> tuple[BoolFn, BoolFn]:
    if f.n == 0:
        raise DimensionError("cannot split a 0-variable function")
    half = f.size // 2
    return BoolFn(f.n - 1, f.table >> half), BoolFn(f.n - 1, f.table & ((1 << half) - 1))


def leq(g: BoolFn, h: BoolFn) -> bool:
    _check_same(g, h)
    return g.table & ~h.table == 0


def shift(f: BoolFn, alpha: Sequence[int] | str | int) -> BoolFn:
    """Translate inputs: returns ``x -> f(x XOR alpha)``."""
    a = _as_bits(alpha, f.n)
    t = f.table
    for i, (s, upper) in enumerate(var_masks(f.n)):
        if a >> (f.n - 1 - i) & 1:
            lower = upper << s
            t = ((t & lower) >> s) | ((t & upper) << s)
    return BoolFn(f.n, t)


def monotone_directions(f: BoolFn) -> list[tuple[bool, bool]]:
    """For each variable, whether ``f`` is increasing and whether it is decreasing in it."""
    t = f.table
    out = []
    for s, upper in var_masks(f.n):
        lo = (t >> s) & upper
        hi = t & upper
        out.append((lo & ~hi == 0, hi & ~lo == 0))
    return out


def direction_masks(f: BoolFn) -> tuple[int, int]:
    """``(inc, dec)`` as ``n``-bit integers, ``x_1`` in the top bit."""
    inc = dec = 0
    for up, down in monotone_directions(f):
        inc = (inc << 1) | up
        dec = (dec << 1) | down
    return inc, dec


def is_monotone(f: BoolFn) -> bool:
    t = f.table
    for s, upper in var_masks(f.n):
        if (t >> s) & upper & ~t:
            return False
    return True


def is_unate(f: BoolFn) -> bool:
    return all(up or down for up, down in monotone_directions(f))


def is_nondegenerate(f: BoolFn) -> bool:
    t = f.table
    return all(((t >> s) ^ t) & upper for s, upper in var_masks(f.n))


def is_balanced(f: BoolFn) -> bool:
    if f.n == 0:
        raise ValueError("balance is undefined for 0-variable functions")
    return weight(f) == f.size // 2


class SigTag(enum.Enum):
    Z = "z"
    O = "o"
    VEC = "vec"


@dataclass(frozen=True)
class Signature:
    """Direction record of a unate function.

    ``Z`` and ``O`` tag the constants.  Otherwise ``alpha`` is an ``n``-character
    string with ``alpha[i - 1] == "1"`` iff the function is increasing in
    ``x_i``; a variable the function ignores counts as increasing.
    """

    tag: SigTag
    alpha: str = ""

    @classmethod
    def vec(cls, alpha: str | int, n: int | None = None) -> "Signature":
        if isinstance(alpha, int):
            alpha = format(alpha, f"0{n}b") if n else ""
        return cls(SigTag.VEC, alpha)

    def __str__(self) -> str:
        return self.tag.value if self.tag is not SigTag.VEC else self.alpha


SIG_Z = Signature(SigTag.Z)
SIG_O = Signature(SigTag.O)


def signature(f: BoolFn) -> Signature:
    if f.table == 0:
        return SIG_Z
    if f.table == table_mask(f.n):
        return SIG_O
    dirs = monotone_directions(f)
    for i, (up, down) in enumerate(dirs, start=1):
        if not (up or down):
            raise NotUnate(f"{format_boolfn(f)} is neither increasing nor decreasing in x_{i}")
    return Signature.vec("".join("1" if up else "0" for up, _ in dirs))


def all_functions(n: int) -> Iterable[BoolFn]:
    for t in range(1 << (1 << n)):
        yield BoolFn(n, t)
