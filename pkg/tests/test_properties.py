"""Randomized invariants checked against the brute-force references."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cutswap import (
    GeneratorSpec,
    SetFamily,
    build_intervals,
    c1p_test,
    compute_max,
    gen_family,
    lr_order,
    parse_family,
    refine_step1,
    render_family,
    sl_lists,
    swap_partition_class,
)
from cutswap.oracle import (
    brute_c1p,
    brute_c1p_naive,
    brute_max,
    brute_overlap_classes,
    check_lemma1,
    check_lexicographic,
    check_swap_order,
    check_witness,
    masks,
    overlaps,
)
from cutswap.refine import Fail, NoCut, classify, init_partition, refine_row

from conftest import BACKENDS


@st.composite
def families(draw, max_n=7, max_m=6):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), max_size=max_m))
    return SetFamily.from_rows(rows, n)


@st.composite
def interval_families(draw, max_n=8, max_m=8):
    """Rows that are windows of a random permutation, so always C1P."""
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(range(n)))
    rows = []
    for _ in range(draw(st.integers(0, max_m))):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(a, n - 1))
        rows.append(perm[a:b + 1])
    return SetFamily.from_rows(rows, n)


def components(f):
    return sorted(sorted(g) for g in brute_overlap_classes(f).components() if len(g) > 1)


@given(families())
def test_verdict_matches_brute(f):
    want = brute_c1p(f)
    for b in BACKENDS:
        assert c1p_test(f, backend=b).c1p == want


@given(interval_families())
def test_windows_are_accepted_with_witness(f):
    rep = c1p_test(f)
    assert rep.c1p
    for c in rep.classes:
        assert check_witness(f, c.rows, c.parts)


@given(families(max_n=9, max_m=14))
def test_classes_orders_max(f):
    lr = lr_order(f)
    want_max = brute_max(f, lr)
    for b in BACKENDS:
        assert [compute_max(f, lr, backend=b)[r] for r in range(f.m)] == want_max
        rep = c1p_test(f, backend=b)
        assert sorted(c.rows for c in rep.classes) == components(f)
        for c in rep.classes:
            assert check_swap_order(f, c.rows, c.order)
            if c.c1p:
                assert check_witness(f, c.rows, c.parts)
        covered = sorted([r for c in rep.classes for r in c.rows] + rep.singletons)
        assert covered == list(range(f.m))
        assert rep.c1p == all(c.c1p for c in rep.classes)


@given(families(max_n=8, max_m=10))
def test_max_neighbourhood(f):
    lr = lr_order(f)
    assert check_lemma1(f, lr, compute_max(f, lr))


@given(families(max_n=12, max_m=12))
def test_lexicographic_column_order(f):
    lr = lr_order(f)
    assert check_lexicographic(f, lr, refine_step1(f, lr).parts())


@given(families(max_n=9, max_m=12))
def test_intervals_stay_in_one_class(f):
    lr = lr_order(f)
    sl = sl_lists(f, lr)
    ivs, _ = build_intervals(f, lr, sl, compute_max(f, lr))
    comp = brute_overlap_classes(f).component
    for iv in ivs:
        assert len({comp[r] for r in iv.members(sl)}) == 1
        assert len(iv) >= 2


@given(families(max_n=9, max_m=12))
def test_sl_lists_sorted_in_decreasing_lr(f):
    lr = lr_order(f)
    assert sorted(lr.order.tolist()) == list(range(f.m))
    for b in BACKENDS:
        sl = sl_lists(f, lr, backend=b)
        for c in range(f.n):
            ranks = lr.rank[sl[c]]
            assert (np.diff(ranks) < 0).all()
            assert sorted(sl[c].tolist()) == [r for r in range(f.m) if c in f.rows[r]]


@given(families(max_n=7, max_m=7))
def test_brute_routes_agree(f):
    assert brute_c1p(f) == brute_c1p_naive(f)


@given(families(), st.randoms(use_true_random=False))
def test_brute_verdict_ignores_row_order(f, rnd):
    rows = list(f.rows)
    rnd.shuffle(rows)
    assert brute_c1p(SetFamily.from_rows(rows, f.n)) == brute_c1p(f)


@given(families(max_n=9, max_m=10))
def test_round_trip(f):
    g = parse_family(render_family(f))
    assert parse_family(render_family(g)) == g
    assert g.m == f.m and g.total_size == f.total_size


@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 10_000))
def test_c1p_generator(n, m, seed):
    assert brute_c1p(gen_family(GeneratorSpec("c1p_positive", n, m, seed=seed)))


@given(families(max_n=9, max_m=12))
def test_refinement_conservation_and_neutrality(f):
    """Replay every class order: NoCut never mutates, the window always holds
    exactly the columns seen so far, and a swap pairs overlapping rows."""
    ms = masks(f)
    for c in c1p_test(f, backend="python").classes:
        order = c.order
        support = len(set().union(*(f.rows[r] for r in order)))
        pa = init_partition(f.rows[order[0]], support)
        seen = set(f.rows[order[0]])
        j = 1
        while j < len(order):
            r = order[j]
            before = pa.state()
            plan = classify(pa, f.rows[r], r)
            assert pa.state() == before
            if isinstance(plan, NoCut):
                nxt = order[j + 1]
                assert overlaps(ms[r], ms[nxt])
                seq = [nxt, r]
                j += 2
            else:
                seq = [r]
                j += 1
            for x in seq:
                out = refine_row(pa, f.rows[x], x)
                if isinstance(out, Fail):
                    break
                seen.update(f.rows[x])
                pa.check()
                assert set(pa.loc) == seen
            else:
                continue
            break


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled core not built")
@given(families(max_n=30, max_m=40))
def test_backends_agree(f):
    a, b = (c1p_test(f, backend=x) for x in BACKENDS)
    assert a.c1p == b.c1p and a.singletons == b.singletons
    assert a.stats["interval_total_length"] == b.stats["interval_total_length"]
    assert [(c.rows, c.order, c.c1p, c.parts, c.fail, c.swap_count) for c in a.classes] == [
        (c.rows, c.order, c.c1p, c.parts, c.fail, c.swap_count) for c in b.classes
    ]


@given(families(max_n=9, max_m=10))
def test_swap_partition_matches_pipeline(f):
    for c in c1p_test(f, backend="python").classes:
        again = swap_partition_class(f, c.order, c.class_id)
        assert (again.c1p, again.parts, again.fail) == (c.c1p, c.parts, c.fail)
