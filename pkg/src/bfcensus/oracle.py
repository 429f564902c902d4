"""Exhaustive ground truth over every truth table of ``n <= 4`` variables.

The census itself uses only the scalar predicates of :mod:`bfcensus.bfcore`
and its own loops; the generators and the count algebra are touched only by
:func:`verify_all`, which compares them against the census.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import packed
from .bfcore import BoolFn, monotone_directions, signature, weight
from .equiv import class_census_by_canonical, filter_classes
from .sets import FunctionSet, Origin

ORACLE_MAX_N = 4
ORACLE_LARGE_N = 5

BASE_PROPERTIES = ("A", "B", "M", "BM", "U", "BU")
PROPERTIES = BASE_PROPERTIES + tuple("nd" + p for p in BASE_PROPERTIES)


def class_label(prop: str) -> str:
    return "ndCls" + prop[2:] if prop.startswith("nd") else "cls" + prop


@dataclass
class OracleCensus:
    n: int
    per_property: dict[str, int]
    per_weight: dict[tuple[str, int], int]
    class_counts: dict[str, int]
    function_sets: dict[str, FunctionSet] | None = None

    def weight_row(self, prop: str) -> list[int]:
        return [self.per_weight.get((prop, w), 0) for w in range((1 << self.n) + 1)]


def _classify(f: BoolFn) -> dict[str, bool]:
    dirs = monotone_directions(f)
    mono = all(up for up, _ in dirs)
    unate = all(up or down for up, down in dirs)
    nondeg = not any(up and down for up, down in dirs)
    bal = f.n > 0 and weight(f) == 1 << (f.n - 1)
    base = {"A": True, "B": bal, "M": mono, "BM": mono and bal, "U": unate, "BU": unate and bal}
    out = dict(base)
    for k, v in base.items():
        out["nd" + k] = v and nondeg
    return out


def _classify_block(tables: np.ndarray, n: int) -> dict[str, np.ndarray]:
    inc, dec = packed.direction_masks(tables, n)
    full = (1 << n) - 1
    mono = inc == full
    unate = (inc | dec) == full
    nondeg = (inc & dec) == 0
    bal = packed.weights(tables) == (1 << (n - 1)) if n else np.zeros(len(tables), dtype=bool)
    base = {"A": np.ones(len(tables), dtype=bool), "B": bal, "M": mono, "BM": mono & bal,
            "U": unate, "BU": unate & bal}
    out = dict(base)
    for k, v in base.items():
        out["nd" + k] = v & nondeg
    return out


def brute_force_census(n: int, materialize: bool = False, *, classes: bool = True,
                       allow_large: bool = False) -> OracleCensus:
    """Classify every ``n``-variable function.

    ``n = 5`` (about 4.3e9 tables) needs ``allow_large`` and switches to a
    block-vectorised scan; all-function sets are then not materialised.
    """
    if not 0 <= n <= ORACLE_LARGE_N:
        raise ValueError(f"oracle covers 0 <= n <= {ORACLE_LARGE_N}, got {n}")
    if n > ORACLE_MAX_N and not allow_large:
        raise ValueError(f"oracle at n={n} needs allow_large")
    counts: Counter = Counter()
    per_weight: Counter = Counter()
    members: dict[str, list] = {p: [] for p in PROPERTIES}
    keep_all = n <= ORACLE_MAX_N
    if n <= ORACLE_MAX_N:
        for t in range(1 << (1 << n)):
            f = BoolFn(n, t)
            w = weight(f)
            for prop, ok in _classify(f).items():
                if ok:
                    counts[prop] += 1
                    per_weight[prop, w] += 1
                    members[prop].append(t)
    else:
        total = 1 << (1 << n)
        step = 1 << 24
        for start in range(0, total, step):
            tables = np.arange(start, min(start + step, total), dtype=np.uint64)
            w = packed.weights(tables)
            for prop, mask in _classify_block(tables, n).items():
                counts[prop] += int(mask.sum())
                for wv, c in zip(*np.unique(w[mask], return_counts=True)):
                    per_weight[prop, int(wv)] += int(c)
                if prop not in ("A", "B", "ndA", "ndB"):
                    members[prop].append(tables[mask])
    sets = {}
    for prop in PROPERTIES:
        if not keep_all and prop in ("A", "B", "ndA", "ndB"):
            continue
        data = members[prop]
        arr = np.concatenate(data) if data and isinstance(data[0], np.ndarray) else np.array(data, dtype=np.uint64)
        sets[prop] = FunctionSet(n, arr.astype(np.uint64), Origin.BRUTE_FORCE)
    cls = {}
    if classes:
        for prop, s in sets.items():
            cls[class_label(prop)] = filter_classes(s).class_count
    per_property = {p: counts.get(p, 0) for p in PROPERTIES}
    return OracleCensus(n, per_property, dict(per_weight), cls, sets if materialize else None)


# -- verification report ------------------------------------------------------

@dataclass(frozen=True)
class Check:
    group: str
    name: str
    n: int
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.group:<10} {self.name:<34} n={self.n}  expected={self.expected}  actual={self.actual}"


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, group: str, name: str, n: int, expected, actual) -> None:
        self.checks.append(Check(group, name, n, expected, actual))

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"{len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def to_json(self) -> str:
        def enc(v):
            return str(v) if isinstance(v, int) and not isinstance(v, bool) else v
        return json.dumps({
            "ok": self.ok,
            "checks": [{"group": c.group, "name": c.name, "n": c.n, "expected": enc(c.expected),
                        "actual": enc(c.actual), "status": "PASS" if c.ok else "FAIL"}
                       for c in self.checks],
        }, indent=2)


def verify_all(n_max: int = ORACLE_MAX_N, constants=None) -> Report:
    """Compare generators, count algebra and class counting against the oracle."""
    from . import enumerate as gen
    from . import transforms as tr

    constants = constants or tr.KNOWN
    if n_max > ORACLE_MAX_N:
        raise ValueError(f"verify_all stops at n = {ORACLE_MAX_N}")
    report = Report()
    census = [brute_force_census(n, materialize=True) for n in range(n_max + 1)]

    def seq(prop):
        return tr.CountSequence(prop, tuple(c.per_property[prop] for c in census))

    def cls_seq(label):
        return tr.CountSequence(label, tuple(c.class_counts[label] for c in census))

    for c in census:
        n = c.n
        sets = c.function_sets
        mono = gen.enumerate_monotone(n)
        unate = gen.enumerate_unate(n)
        bm = gen.enumerate_class("balanced-monotone", n)
        bu = gen.filter_balanced(unate.functions)
        produced = {"M": mono, "BM": bm, "U": unate.functions, "BU": bu}
        for prop, s in produced.items():
            report.add("enumerate", f"{prop} set", n, True, s.same_members(sets[prop]))
            nd = gen.filter_nondegenerate(s)
            report.add("enumerate", f"nd{prop} set", n, True, nd.same_members(sets["nd" + prop]))
        if n >= 1:
            bk = gen.balanced_from_buckets(gen.enumerate_monotone(n - 1)).functions
            report.add("enumerate", "BM set via weight buckets", n, True, bk.same_members(sets["BM"]))
        sig_ok = all(sf.sig == signature(sf.fn) for sf in unate)
        report.add("enumerate", "unate signatures", n, True, sig_ok)
        report.add("enumerate", "M weights", n, c.weight_row("M"), gen.bucket_by_weight(mono).sizes())
        report.add("enumerate", "U weights", n, c.weight_row("U"), gen.bucket_by_weight(unate.functions).sizes())

        for prop, s in produced.items():
            for variant, ss in ((prop, s), ("nd" + prop, gen.filter_nondegenerate(s))):
                label = class_label(variant)
                report.add("equiv", f"{label} filter", n, c.class_counts[label], filter_classes(ss).class_count)
                report.add("equiv", f"{label} canonical", n, c.class_counts[label],
                           class_census_by_canonical(ss).class_count)

    chain = tr.monotone_chain(constants)
    top = n_max + 1
    for prop in ("M", "ndM", "ndU", "U"):
        for n in range(top):
            report.add("transform", f"{prop} from Dedekind chain", n, seq(prop)[n], chain[prop][n])
    BM = tr.CountSequence("BM", tuple(len(gen.enumerate_class("balanced-monotone", n)) for n in range(top)))
    bchain = tr.balanced_chain(BM)
    for prop in ("BM", "ndBM", "ndBU", "BU"):
        for n in range(top):
            report.add("transform", f"{prop} from BM chain", n, seq(prop)[n], bchain[prop][n])
    for prop in BASE_PROPERTIES:
        inv = tr.inverse_binomial_transform(seq(prop), "nd" + prop)
        fwd = tr.binomial_transform(seq("nd" + prop), prop)
        for n in range(top):
            report.add("transform", f"nd{prop} by inverse transform", n, seq("nd" + prop)[n], inv[n])
            report.add("transform", f"{prop} by binomial transform", n, seq(prop)[n], fwd[n])
    ndA = tr.inverse_binomial_transform(tr.all_functions_counts(n_max), "ndA")
    ndB = tr.inverse_binomial_transform(tr.balanced_counts(n_max), "ndB")
    for n in range(top):
        report.add("transform", "ndA closed form", n, seq("ndA")[n], ndA[n])
        report.add("transform", "ndB closed form", n, seq("ndB")[n], ndB[n])
        report.add("transform", "ndU = 2^n ndM", n, seq("ndU")[n], seq("ndM")[n] << n)
        report.add("transform", "ndBU = 2^n ndBM", n, seq("ndBU")[n], seq("ndBM")[n] << n)
    for prop in BASE_PROPERTIES:
        label = class_label(prop)
        diffs = tr.nondegenerate_class_counts(cls_seq(label), class_label("nd" + prop))
        for n in range(top):
            report.add("transform", f"{class_label('nd' + prop)} first difference", n,
                       census[n].class_counts[class_label("nd" + prop)], diffs[n])
    nd_cls_m = tr.CountSequence("ndClsM", tuple(constants.tables["ndClsM"]))
    cls_m = tr.class_counts_from_nondegenerate(nd_cls_m, "clsM")
    for n in range(top):
        report.add("transform", "clsM prefix sums of ndClsM", n, census[n].class_counts["clsM"], cls_m[n])
    try:
        tr.check_inequalities({p: seq(p) for p in ("M", "BM", "U", "BU", "ndM", "ndBM", "ndU", "ndBU")}
                              | {lbl: cls_seq(lbl) for lbl in ("clsM", "clsBM", "clsU", "clsBU",
                                                              "ndClsM", "ndClsBM", "ndClsU", "ndClsBU")})
        report.add("transform", "all inequalities", n_max, True, True)
    except tr.InequalityViolated as exc:
        report.add("transform", f"inequality: {exc}", n_max, True, False)

    report.add("convention", "M_0", 0, 2, census[0].per_property["M"])
    report.add("convention", "BM_0", 0, 0, census[0].per_property["BM"])
    report.add("convention", "clsM_0", 0, 2, census[0].class_counts["clsM"])
    report.add("convention", "ndM_0", 0, 2, census[0].per_property["ndM"])
    return report


def verify_tables(n_max: int, constants=None, *, threads: int = 1) -> Report:
    """Check count algebra and, up to ``n_max``, direct enumeration against the published tables."""
    from . import enumerate as gen
    from . import transforms as tr

    constants = constants or tr.KNOWN
    tables = constants.tables
    report = Report()

    def table(label):
        return tables[label]

    chain = tr.monotone_chain(constants)
    for prop in ("U", "ndU"):
        for n, v in enumerate(table(prop)):
            report.add("table", f"{prop} via Dedekind chain", n, v, chain[prop][n] if n < len(chain[prop]) else None)
    bchain = tr.balanced_chain(tr.CountSequence("BM", tuple(table("BM"))))
    for prop in ("ndBM", "BU", "ndBU"):
        for n, v in enumerate(table(prop)):
            report.add("table", f"{prop} via BM chain", n, v, bchain[prop][n])
    cls_m = tr.class_counts_from_nondegenerate(tr.CountSequence("ndClsM", tuple(table("ndClsM"))), "clsM")
    for n, v in enumerate(constants.monotone_classes):
        report.add("table", "clsM prefix sums vs A003182", n, v, cls_m[n])
    for label in ("clsBM", "clsU", "clsBU"):
        nd = tr.nondegenerate_class_counts(tr.CountSequence(label, tuple(table(label))))
        for n, v in enumerate(table(nd.label)):
            report.add("table", f"{nd.label} first differences", n, v, nd[n])
    try:
        tr.check_inequalities({k: constants.sequence(k) for k in
                               ("M", "U", "ndU", "BM", "BU", "ndBM", "ndBU", "clsM", "clsBM", "clsU",
                                "clsBU", "ndClsM", "ndClsBM", "ndClsU", "ndClsBU")}
                              | {"ndM": chain["ndM"]})
        report.add("table", "all inequalities", 9, True, True)
    except tr.InequalityViolated as exc:
        report.add("table", f"inequality: {exc}", 9, True, False)

    for n in range(min(n_max, 5) + 1):
        mono = gen.enumerate_monotone(n, threads=threads)
        unate = gen.enumerate_unate(n, threads=threads).functions
        bm = gen.filter_balanced(mono)
        bu = gen.filter_balanced(unate)
        report.add("table", "BM by enumeration", n, table("BM")[n], len(bm))
        report.add("table", "U by enumeration", n, table("U")[n], len(unate))
        report.add("table", "BU by enumeration", n, table("BU")[n], len(bu))
        report.add("table", "M by enumeration", n, constants.dedekind[n], len(mono))
        report.add("table", "clsM by filtering", n, constants.monotone_classes[n], filter_classes(mono).class_count)
        report.add("table", "clsBM by filtering", n, table("clsBM")[n], filter_classes(bm).class_count)
        report.add("table", "clsU by filtering", n, table("clsU")[n], filter_classes(unate).class_count)
        report.add("table", "clsBU by filtering", n, table("clsBU")[n], filter_classes(bu).class_count)
    return report
