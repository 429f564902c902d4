"""Exact count algebra over Python integers.

Counts are indexed by ``n`` from 0.  Index 0 follows the zero-variable
conventions: the strings ``0`` and ``1`` are two non-degenerate monotone
(hence unate), unbalanced functions forming two classes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

LABELS = (
    "M", "BM", "U", "BU", "A", "B",
    "ndM", "ndBM", "ndU", "ndBU", "ndA", "ndB",
    "clsM", "clsBM", "clsU", "clsBU", "clsA", "clsB",
    "ndClsM", "ndClsBM", "ndClsU", "ndClsBU", "ndClsA", "ndClsB",
)

# Dedekind numbers, OEIS A000372.
DEDEKIND = (
    2,
    3,
    6,
    20,
    168,
    7581,
    7828354,
    2414682040998,
    56130437228687557907788,
    286386577668298411128469151667598498812366,
)

# Classes of monotone functions under variable permutation, OEIS A003182.
MONOTONE_CLASSES = (
    2,
    3,
    5,
    10,
    30,
    210,
    16353,
    490013148,
    1392195548889993358,
    789204635842035040527740846300252680,
)

# Published census values, indexed by n from 0.
PUBLISHED = {
    "BM": (0, 1, 2, 4, 24, 621, 492288, 81203064840),
    "ndBM": (0, 1, 0, 1, 16, 526, 488866, 81199631130),
    "U": (2, 4, 14, 104, 2170, 230540, 499596550, 309075799150640,
          14369391928071394429416818,
          146629927766168786368451678290041110762316052),
    "ndU": (2, 2, 8, 72, 1824, 220608, 498243968, 309072306743552,
            14369391925598802012151296,
            146629927766168786239127150948525247729660416),
    "BU": (0, 2, 4, 14, 296, 18202, 31392428, 10393772159334),
    "ndBU": (0, 2, 0, 8, 256, 16832, 31287424, 10393552784640),
    "ndClsM": (2, 1, 2, 5, 20, 180, 16143, 489996795, 1392195548399980210,
               789204635842035039135545297410259322),
    "clsBM": (0, 1, 1, 2, 4, 16, 951),
    "ndClsBM": (0, 1, 0, 1, 2, 12, 935),
    "clsU": (2, 4, 10, 34, 200, 3466, 829774),
    "ndClsU": (2, 2, 6, 24, 166, 3266, 826308),
    "clsBU": (0, 2, 2, 6, 24, 254, 50172),
    "ndClsBU": (0, 2, 0, 4, 18, 230, 49918),
}


class NegativeResult(ArithmeticError):
    """An inverse transform went negative, so the input was not a census."""


class InequalityViolated(AssertionError):
    pass


@dataclass(frozen=True)
class CountSequence:
    label: str
    values: tuple[int, ...]

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        if not self.values:
            raise ValueError("a count sequence starts at n = 0 and cannot be empty")
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError(f"{self.label}: counts must be non-negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def to_json(self) -> str:
        return json.dumps({"label": self.label, "values": [str(v) for v in self.values]})

    @classmethod
    def from_json(cls, text: str) -> "CountSequence":
        d = json.loads(text)
        return cls(d["label"], tuple(int(v) for v in d["values"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in enumerate(self.values):
            w.writerow([n, v])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, label: str, text: str) -> "CountSequence":
        rows = list(csv.DictReader(io.StringIO(text)))
        if [int(r["n"]) for r in rows] != list(range(len(rows))):
            raise ValueError("CSV rows must cover n = 0, 1, 2, ... in order")
        return cls(label, tuple(int(r["value"]) for r in rows))


@dataclass(frozen=True)
class KnownConstants:
    dedekind: tuple[int, ...] = DEDEKIND
    monotone_classes: tuple[int, ...] = MONOTONE_CLASSES
    tables: Mapping[str, tuple[int, ...]] = field(default_factory=lambda: dict(PUBLISHED))
    provenance: Mapping[str, str] = field(default_factory=lambda: {
        "dedekind": "OEIS A000372",
        "monotone_classes": "OEIS A003182",
        **{k: "published census" for k in PUBLISHED},
    })

    def sequence(self, label: str) -> CountSequence:
        if label == "M":
            return CountSequence("M", self.dedekind)
        if label == "clsM":
            return CountSequence("clsM", self.monotone_classes)
        return CountSequence(label, self.tables[label])


KNOWN = KnownConstants()


def _pascal_rows(n: int) -> list[list[int]]:
    rows = [[1]]
    for _ in range(n):
        prev = rows[-1]
        rows.append([1] + [prev[k] + prev[k + 1] for k in range(len(prev) - 1)] + [1])
    return rows


def binomial_transform(nd: CountSequence | Sequence[int], label: str | None = None) -> CountSequence:
    """``P_n = sum_i C(n, i) * nd_i``."""
    vals = nd.values if isinstance(nd, CountSequence) else tuple(nd)
    out_label = label or (nd.label[2:] if isinstance(nd, CountSequence) and nd.label.startswith("nd")
                          and nd.label[2:] in LABELS else "M")
    rows = _pascal_rows(len(vals) - 1)
    return CountSequence(out_label, tuple(sum(c * v for c, v in zip(rows[n], vals))
                                          for n in range(len(vals))))


def inverse_binomial_transform(p: CountSequence | Sequence[int], label: str | None = None) -> CountSequence:
    """``nd_n = sum_i (-1)^(n-i) C(n, i) P_i``; raises NegativeResult on inconsistent input."""
    vals = p.values if isinstance(p, CountSequence) else tuple(p)
    rows = _pascal_rows(len(vals) - 1)
    out = []
    for n in range(len(vals)):
        v = sum((-1) ** (n - i) * rows[n][i] * vals[i] for i in range(n + 1))
        if v < 0:
            raise NegativeResult(f"inverse transform is negative at n={n}: {v}")
        out.append(v)
    out_label = label or (("nd" + p.label) if isinstance(p, CountSequence) and "nd" + p.label in LABELS
                          else "ndM")
    return CountSequence(out_label, tuple(out))


def unate_from_monotone(ndM: CountSequence) -> CountSequence:
    """Non-degenerate unate counts: ``2**n`` translates of each non-degenerate monotone function."""
    return CountSequence("ndU", tuple(v << n for n, v in enumerate(ndM.values)))


def balanced_unate_from_balanced_monotone(ndBM: CountSequence) -> CountSequence:
    return CountSequence("ndBU", tuple(v << n for n, v in enumerate(ndBM.values)))


def class_counts_from_nondegenerate(ndCls: CountSequence, label: str | None = None) -> CountSequence:
    """Prefix sums: every class has a unique set of essential variables up to relabelling."""
    acc = 0
    out = []
    for v in ndCls.values:
        acc += v
        out.append(acc)
    default = ndCls.label.replace("ndCls", "cls") if ndCls.label.startswith("ndCls") else "clsM"
    return CountSequence(label or default, tuple(out))


def nondegenerate_class_counts(cls: CountSequence, label: str | None = None) -> CountSequence:
    """First differences, the inverse of :func:`class_counts_from_nondegenerate`."""
    vals = cls.values
    out = [vals[0]] + [vals[n] - vals[n - 1] for n in range(1, len(vals))]
    if any(v < 0 for v in out):
        raise NegativeResult(f"{cls.label} is not non-decreasing")
    default = cls.label.replace("cls", "ndCls") if cls.label.startswith("cls") else "ndClsM"
    return CountSequence(label or default, tuple(out))


def all_functions_counts(n_max: int) -> CountSequence:
    return CountSequence("A", tuple(1 << (1 << n) for n in range(n_max + 1)))


def balanced_counts(n_max: int) -> CountSequence:
    from math import comb
    return CountSequence("B", tuple(0 if n == 0 else comb(1 << n, 1 << (n - 1)) for n in range(n_max + 1)))


# -- pipelines ----------------------------------------------------------------

def monotone_chain(constants: KnownConstants = KNOWN) -> dict[str, CountSequence]:
    M = constants.sequence("M")
    ndM = inverse_binomial_transform(M, "ndM")
    ndU = unate_from_monotone(ndM)
    U = binomial_transform(ndU, "U")
    return {"M": M, "ndM": ndM, "ndU": ndU, "U": U}


def balanced_chain(BM: CountSequence | Sequence[int]) -> dict[str, CountSequence]:
    BM = BM if isinstance(BM, CountSequence) else CountSequence("BM", tuple(BM))
    ndBM = inverse_binomial_transform(BM, "ndBM")
    ndBU = balanced_unate_from_balanced_monotone(ndBM)
    BU = binomial_transform(ndBU, "BU")
    return {"BM": BM, "ndBM": ndBM, "ndBU": ndBU, "BU": BU}


# -- inequalities -------------------------------------------------------------

@dataclass(frozen=True)
class InequalityRow:
    name: str
    n: int
    lhs: int
    rhs: int

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


# (left, right): left_n <= 2**n * right_n
INEQUALITIES = (
    ("ndU", "ndM"), ("ndBU", "ndBM"), ("U", "M"), ("BU", "BM"),
    ("ndClsU", "ndClsM"), ("ndClsBU", "ndClsBM"), ("clsU", "clsM"), ("clsBU", "clsBM"),
)


def check_inequalities(seqs: Iterable[CountSequence] | Mapping[str, CountSequence],
                       strict: bool = True) -> list[InequalityRow]:
    """Evaluate every ``X_n <= 2**n * Y_n`` for which both sides are present.

    Rows come back with their slack.  With ``strict`` a violation raises
    :class:`InequalityViolated`.
    """
    if isinstance(seqs, Mapping):
        by = dict(seqs)
    else:
        by = {s.label: s for s in seqs}
    rows = []
    for left, right in INEQUALITIES:
        if left not in by or right not in by:
            continue
        a, b = by[left], by[right]
        for n in range(min(len(a), len(b))):
            row = InequalityRow(f"{left} <= 2^n*{right}", n, a[n], b[n] << n)
            if strict and not row.ok:
                raise InequalityViolated(f"{row.name} fails at n={n}: {row.lhs} > {row.rhs}")
            rows.append(row)
    return rows
