"""Acceptance criteria 1 to 9, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.  Criterion 6
includes the [M]_6 class census by filtering, which takes a minute or two.
"""

import hashlib
import time
from contextlib import contextmanager, redirect_stdout
from io import StringIO

import numpy as np
import pytest

from bfcensus import cli
from bfcensus import transforms as tr
from bfcensus.bfcore import (
    all_functions, dual, is_monotone, is_nondegenerate, is_unate, monotone_directions, negate,
    shift, signature,
)
from bfcensus.enumerate import (
    enumerate_class, enumerate_monotone, enumerate_unate, filter_nondegenerate,
)
from bfcensus.equiv import class_census_by_canonical, filter_classes
from bfcensus.oracle import brute_force_census, verify_all

PUB = tr.PUBLISHED


@contextmanager
def criterion(capsys, k, title, budget=None):
    t0 = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - t0
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
    except BaseException as exc:
        with capsys.disabled():
            print(f"\nFAIL criterion {k}: {title} ({type(exc).__name__}: {exc})")
        raise
    with capsys.disabled():
        print(f"\nPASS criterion {k}: {title} [{elapsed:.2f}s]")


@pytest.fixture(scope="module")
def oracle():
    return {n: brute_force_census(n, materialize=True) for n in range(5)}


def test_criterion_1_oracle_equivalence(capsys):
    with criterion(capsys, 1, "oracle agrees with enumerate, transforms and equiv for n = 0..4", 10):
        report = verify_all(4)
        assert report.ok, "\n".join(c.line() for c in report.failures)
        groups = {c.group for c in report.checks}
        assert {"enumerate", "transform", "equiv"} <= groups, groups
        props = {c.name.split()[0] for c in report.checks}
        for p in ("M", "BM", "U", "BU", "ndM", "ndBM", "ndU", "ndBU",
                  "clsM", "clsBM", "clsU", "clsBU", "ndClsM", "ndClsBM", "ndClsU", "ndClsBU"):
            assert p in props, p


def test_criterion_2_balanced_monotone_counts(capsys):
    with criterion(capsys, 2, "BM_n and nd-BM_n for n = 0..6 by enumeration"):
        bm = []
        for n in range(7):
            t0 = time.perf_counter()
            bm.append(len(enumerate_class("balanced-monotone", n)))
            if n == 6:
                assert time.perf_counter() - t0 < 120
        assert tuple(bm) == (0, 1, 2, 4, 24, 621, 492288)
        nd = tr.inverse_binomial_transform(tr.CountSequence("BM", bm))
        assert nd.values == (0, 1, 0, 1, 16, 526, 488866)


def test_criterion_3_unate_counts_by_transform(capsys):
    with criterion(capsys, 3, "U_n and nd-U_n for n = 0..9 from Dedekind numbers", 1):
        chain = tr.monotone_chain()
        assert chain["U"].values == PUB["U"]
        assert chain["ndU"].values == PUB["ndU"]
        assert chain["U"][9] == 146629927766168786368451678290041110762316052


def test_criterion_4_balanced_unate_counts(capsys):
    bm = [len(enumerate_class("balanced-monotone", n)) for n in range(7)]
    with criterion(capsys, 4, "BU_n and nd-BU_n for n = 0..6 from computed BM", 1):
        chain = tr.balanced_chain(bm)
        assert chain["BU"].values == PUB["BU"][:7]
        assert chain["ndBU"].values == PUB["ndBU"][:7]


def test_criterion_5_unate_enumeration(capsys):
    with criterion(capsys, 5, "direct unate enumeration n = 0..5 with signatures", 60):
        for n in range(6):
            u = enumerate_unate(n)
            assert len(u) == PUB["U"][n], n
            for sf in u:
                assert sf.sig == signature(sf.fn)


def test_criterion_6_monotone_class_counts(capsys, oracle):
    with criterion(capsys, 6, "prefix sums of nd-[M] reproduce [M]_n; [M]_5, [M]_6 by filtering", 600):
        cls = tr.class_counts_from_nondegenerate(tr.KNOWN.sequence("ndClsM"))
        assert cls.values == tr.MONOTONE_CLASSES
        got = [oracle[n].class_counts["clsM"] for n in range(5)]
        for n in (5, 6):
            got.append(filter_classes(enumerate_monotone(n)).class_count)
        assert got == list(cls.values[:7]) == [2, 3, 5, 10, 30, 210, 16353]


def test_criterion_7_class_counts(capsys):
    with criterion(capsys, 7, "[BM]_n (0..6), [U]_n and [BU]_n (0..5) with nd-variants"):
        ranges = {"balanced-monotone": ("clsBM", 7), "unate": ("clsU", 6),
                  "balanced-unate": ("clsBU", 6)}
        for name, (label, top) in ranges.items():
            counts, nd_direct = [], []
            for n in range(top):
                s = enumerate_class(name, n)
                counts.append(filter_classes(s).class_count)
                nd_direct.append(filter_classes(filter_nondegenerate(s)).class_count)
            assert tuple(counts) == PUB[label][:top], name
            nd = tr.nondegenerate_class_counts(tr.CountSequence(label, counts))
            assert nd.values == PUB["nd" + label[0].upper() + label[1:]][:top]
            assert list(nd.values) == nd_direct


def test_criterion_8_property_suites(capsys, oracle):
    with criterion(capsys, 8, "weight symmetry, nd identities, orbits, closures, round trip, filter = canonical"):
        for n, c in oracle.items():
            for prop in ("M", "U"):
                row = c.weight_row(prop)
                assert row == row[::-1], (prop, n)
            p = c.per_property
            assert p["ndU"] == p["ndM"] << n
            assert p["ndBU"] == p["ndBM"] << n
        for n in range(5):
            for f in all_functions(n):
                if is_monotone(f):
                    assert is_monotone(dual(f))
                    images = {shift(f, a) for a in range(1 << n)}
                    if is_nondegenerate(f):
                        assert len(images) == 1 << n
                    for i, (up, down) in enumerate(monotone_directions(f)):
                        if up and down:
                            assert shift(f, 1 << (n - 1 - i)) == f
                if is_unate(f):
                    assert is_unate(negate(f))
        rng = np.random.default_rng(7)
        for _ in range(50):
            vals = [int(v) for v in rng.integers(0, 1 << 62, size=10)]
            nd = tr.CountSequence("ndM", vals)
            assert tr.inverse_binomial_transform(tr.binomial_transform(nd)).values == nd.values
        for n in range(6):
            for name in ("monotone", "balanced-monotone", "unate", "balanced-unate"):
                s = enumerate_class(name, n)
                for x in (s, filter_nondegenerate(s)):
                    assert filter_classes(x).class_count == class_census_by_canonical(x).class_count


COMMANDS = [
    ["enumerate", "--class", "monotone", "--n", "5", "--weights"],
    ["enumerate", "--class", "balanced-monotone", "--n", "6"],
    ["enumerate", "--class", "unate", "--n", "5", "--signatures"],
    ["enumerate", "--class", "balanced-unate", "--n", "5", "--nondegenerate"],
    ["classes", "--class", "unate", "--n", "4", "--method", "both"],
    ["count", "--class", "unate", "--n", "9", "--format", "json"],
    ["verify", "--n-max", "3", "--format", "json"],
]


def _run(argv, out_path, threads):
    argv = list(argv) + ["--threads", str(threads)]
    if argv[0] in ("enumerate", "classes"):
        argv += ["--out", str(out_path)]
    buf = StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    digest = hashlib.sha256(out_path.read_bytes()).hexdigest() if out_path.exists() else None
    return code, buf.getvalue(), digest


def test_criterion_9_determinism(capsys, tmp_path):
    with criterion(capsys, 9, "byte-identical outputs across --threads values"):
        for k, argv in enumerate(COMMANDS):
            runs = [_run(argv, tmp_path / f"c{k}_t{t}.fset", t) for t in (1, 4, 2)]
            assert all(r[0] == 0 for r in runs), argv
            assert len({(r[1], r[2]) for r in runs}) == 1, argv
