import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfcensus import packed
from bfcensus.bfcore import (
    BoolFn, all_functions, is_balanced, is_monotone, is_nondegenerate, is_unate, weight,
)
from bfcensus.enumerate import (
    enumerate_balanced_monotone, enumerate_class, enumerate_monotone, enumerate_unate,
    filter_balanced, filter_nondegenerate,
)
from bfcensus.equiv import (
    all_perm_indices, apply_perm, build_perm_index, canonical_census_stream, canonical_form,
    class_census_by_canonical, compose, filter_classes, filter_classes_reference,
)
from bfcensus.sets import FunctionSet
from bfcensus.store import read_set

F = BoolFn.from_bits


def test_build_perm_index():
    assert list(build_perm_index((2, 1), 2).table) == [0, 2, 1, 3]
    assert list(build_perm_index((1, 2, 3), 3).table) == list(range(8))
    p = build_perm_index((2, 3, 1), 3)
    assert list(compose(compose(p, p), p).table) == list(range(8))


@pytest.mark.parametrize("bad", [(1, 1), (0, 1), (1, 2, 3)])
def test_build_perm_index_rejects_malformed(bad):
    with pytest.raises(ValueError):
        build_perm_index(bad, 2)


def test_apply_perm():
    swap = build_perm_index((2, 1), 2)
    assert apply_perm(F("0010"), swap) == F("0100")
    for p in all_perm_indices(2):
        assert apply_perm(F("0110"), p) == F("0110")
    f = F("00010111")
    for p in all_perm_indices(3):
        assert weight(apply_perm(f, p)) == weight(f)


def test_apply_perm_semantics():
    # f^pi(x_1..x_n) = f(x_pi(1)..x_pi(n))
    for p in all_perm_indices(3):
        for f in (F("00010111"), F("01101000"), F("00000011")):
            g = apply_perm(f, p)
            for x in itertools.product((0, 1), repeat=3):
                y = tuple(x[k - 1] for k in p.perm)
                i = int("".join(map(str, x)), 2)
                j = int("".join(map(str, y)), 2)
                assert g.bit(i) == f.bit(j)


def test_perm_tables_are_permutations():
    for n in range(5):
        for p in all_perm_indices(n):
            assert sorted(p.table.tolist()) == list(range(1 << n))


def test_composition_exhaustive_n3():
    perms = all_perm_indices(3)
    fns = list(all_functions(3))
    for p, q in itertools.product(perms, perms):
        pq = compose(p, q)
        assert pq == build_perm_index(pq.perm, 3)
        for f in fns[::7]:
            assert apply_perm(apply_perm(f, p), q) == apply_perm(f, pq)


def test_canonical_form():
    assert canonical_form(F("0100")) == F("0010")
    assert canonical_form(F("0110")) == F("0110")
    assert canonical_form(F("0101")) == F("0011")


def test_canonical_is_orbit_invariant_exhaustive():
    for n in range(4):
        perms = all_perm_indices(n)
        for f in all_functions(n):
            c = canonical_form(f)
            assert canonical_form(c) == c
            assert c == min(apply_perm(f, p) for p in perms)
            for p in perms:
                assert canonical_form(apply_perm(f, p)) == c


@settings(max_examples=60)
@given(st.sampled_from([4, 5]).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1))))
def test_canonical_sampled(nt):
    n, t = nt
    f = BoolFn(n, t)
    c = canonical_form(f)
    assert canonical_form(c) == c
    for p in all_perm_indices(n)[::5]:
        assert canonical_form(apply_perm(f, p)) == c


def test_properties_closed_under_permutation_exhaustive():
    for n in range(1, 4):
        perms = all_perm_indices(n)
        for f in all_functions(n):
            key = (is_monotone(f), is_unate(f), is_balanced(f), is_nondegenerate(f), weight(f))
            for p in perms[1:]:
                g = apply_perm(f, p)
                assert (is_monotone(g), is_unate(g), is_balanced(g), is_nondegenerate(g),
                        weight(g)) == key


def _profile(items, n):
    inc, dec = packed.direction_masks(items, n)
    full = (1 << n) - 1
    return np.stack([inc == full, (inc | dec) == full, packed.weights(items),
                     packed.nondegenerate_mask(items, n)])


def test_properties_closed_under_permutation_n4():
    items = packed.all_tables(4)
    base = _profile(items, 4)
    for p in all_perm_indices(4)[1:]:
        assert np.array_equal(_profile(packed.reindex(items, 4, p.table), 4), base)


def test_filter_classes_examples():
    assert filter_classes(enumerate_unate(2).functions).class_count == 10
    assert filter_classes(enumerate_balanced_monotone(5)).class_count == 16
    assert filter_classes(enumerate_unate(4).functions).class_count == 200


def test_canonical_census_examples():
    assert class_census_by_canonical(enumerate_monotone(3)).class_count == 10
    assert class_census_by_canonical(enumerate_unate(5).functions).class_count == 3466
    bu4 = filter_balanced(enumerate_unate(4).functions)
    assert class_census_by_canonical(bu4).class_count == 24


def suites(n_max=5):
    for n in range(n_max + 1):
        for name in ("monotone", "balanced-monotone", "unate", "balanced-unate"):
            s = enumerate_class(name, n)
            yield f"{name}-{n}", s
            yield f"nd-{name}-{n}", filter_nondegenerate(s)


@pytest.mark.parametrize("label,s", list(suites()), ids=lambda v: v if isinstance(v, str) else "")
def test_filter_matches_canonical(label, s):
    a = filter_classes(s)
    b = class_census_by_canonical(s, threads=2)
    assert a.class_count == b.class_count
    # first-in-order representatives are the orbit minima
    assert np.array_equal(a.representatives.items, b.representatives.items)


def test_block_filter_matches_reference():
    for s in (enumerate_unate(3).functions, enumerate_monotone(4), enumerate_unate(4).functions):
        ref = filter_classes_reference(s)
        for block in (1, 7, 64, 1 << 19):
            got = filter_classes(s, block=block)
            assert np.array_equal(got.representatives.items, ref.representatives.items)


def test_filter_handles_subsets_in_order():
    # representative is the first function of its class in the input, which
    # need not be the orbit minimum when the minimum is absent
    s = FunctionSet.from_functions([F("0100"), F("0111")])
    c = filter_classes(s)
    assert c.representatives.strings() == ["0100", "0111"]
    assert filter_classes_reference(s).representatives.strings() == ["0100", "0111"]


def test_representatives_are_pairwise_inequivalent():
    c = filter_classes(enumerate_unate(4).functions)
    forms = {canonical_form(f) for f in c.representatives}
    assert len(forms) == c.class_count == len(c.representatives)


def test_wide_tables_use_generic_path():
    fns = [BoolFn(7, 1 << k) for k in (0, 1, 2, 64, 127)]
    s = FunctionSet.from_functions(fns)
    assert filter_classes(s).class_count == 3
    assert class_census_by_canonical(s).class_count == 3


def test_census_save(tmp_path):
    c = filter_classes(enumerate_balanced_monotone(4))
    path = tmp_path / "bm4.fset"
    c.save(path, "balanced-monotone")
    side = json.loads((tmp_path / "bm4.fset.json").read_text())
    assert side == {"property": "balanced-monotone", "n": 4, "classCount": 4, "sourceSize": 24}
    assert read_set(path).same_members(c.representatives)


def test_streaming_canonical(tmp_path):
    u = enumerate_unate(4).functions
    blocks = (u.items[i:i + 100] for i in range(0, len(u), 100))
    h = canonical_census_stream(blocks, 4, tmp_path / "c.fset", run_bytes=512, tmpdir=tmp_path)
    assert h.count == 200
    assert packed.strictly_sorted(read_set(tmp_path / "c.fset").items)
