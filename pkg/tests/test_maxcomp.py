import pytest

from cutswap import SetFamily, compute_max, lr_order, refine_step1
from cutswap.errors import InternalInvariant
from cutswap.maxcomp import RestrictedPartition, bounds, build_am
from cutswap.oracle import brute_max

from conftest import R2, R3, R4, R5, R7, names


def partition_of(parts):
    """A RestrictedPartition already split into ``parts`` (lists of ints)."""
    rp = RestrictedPartition([c for p in parts for c in p])
    rp.start, rp.end, rp._touched = [], [], []
    pos = 0
    for k, p in enumerate(parts):
        rp.start.append(pos)
        pos += len(p)
        rp.end.append(pos)
        rp._touched.append(0)
        for c in p:
            rp.part_of[c] = k
    return rp


def test_refine_moves_touched_right():
    letters = "aijklbcdefgh"
    ix = {ch: i for i, ch in enumerate(letters)}
    rp = partition_of([[ix[ch] for ch in p] for p in ["a", "ijkl", "b", "cd", "efgh"]])
    splits = rp.refine([ix["d"], ix["e"]])
    got = [set(letters[c] for c in p) for p in rp.parts()]
    assert got == [set(s) for s in ["a", "ijkl", "b", "c", "d", "fgh", "e"]]
    assert len(splits) == 2


def test_refine_whole_part_is_noop():
    rp = RestrictedPartition([0, 1, 2])
    assert rp.refine([0, 1, 2]) == []
    assert [sorted(p) for p in rp.parts()] == [[0, 1, 2]]


def test_stable_refine_rejects_misaligned():
    rp = RestrictedPartition([0, 1, 2])
    with pytest.raises(InternalInvariant):
        rp.refine([0], stable=True)
    assert rp.refine([2], stable=True) == [(1, 1)]


def test_pf_single_row():
    f = SetFamily.from_rows([(0, 1)], ["a", "b", "c"])
    assert names(f, refine_step1(f).parts()) == ["c", "ab"]


def test_pf_f5(f5):
    pf = refine_step1(f5, lr_order(f5))
    assert names(f5, pf.parts()) == ["b", "c", "d", "fg", "h", "e"]


def test_bounds_f5(f5):
    bnd = bounds(f5, refine_step1(f5))
    assert (bnd.left[R4], bnd.right[R4]) == (2, 6)
    assert (bnd.left[R7], bnd.right[R7]) == (0, 5)
    full = SetFamily.from_rows([(0, 1, 2)])
    b = bounds(full, refine_step1(full))
    assert (b.left[0], b.right[0]) == (0, 2)


def test_am_f5(f5):
    lr = lr_order(f5)
    bnd = bounds(f5, refine_step1(f5, lr))
    am = build_am(bnd, lr, f5.n)
    assert am.bucket(6) == [R3, R4, R5]
    assert am.bucket(2) == [R2]
    assert am.bucket(5) == [R7]
    am.remove(R4)
    assert am.bucket(6) == [R3, R5]
    am.remove(R3)
    assert am.front(6) == R5


def test_am_empty():
    f = SetFamily.from_rows([], 3)
    lr = lr_order(f)
    am = build_am(bounds(f, refine_step1(f, lr)), lr, f.n)
    assert all(am.front(p) is None for p in range(3))


def test_max_f5(f5, backend):
    mx = compute_max(f5, backend=backend)
    assert mx.as_dict() == {R2: R3, R3: None, R4: R5, R5: None, R7: R3}


def test_max_disjoint(backend):
    f = SetFamily.from_rows([(0, 1), (2, 3)])
    assert compute_max(f, backend=backend).as_dict() == {0: None, 1: None}


def test_max_duplicates(backend):
    f = SetFamily.from_rows([(0, 1), (0, 1), (1, 2)])
    mx = compute_max(f, backend=backend)
    assert mx[1] is None and mx[0] is None and mx[2] == 0


def test_max_no_self_capture(backend):
    # a row whose own refinement splits its span must not become its own Max
    f = SetFamily.from_rows([(0, 1, 2, 3), (1, 2), (2, 3, 4)])
    lr = lr_order(f)
    assert [compute_max(f, lr, backend=backend)[r] for r in range(3)] == brute_max(f, lr)


def test_max_empty(backend):
    f = SetFamily.from_rows([], 0)
    assert len(compute_max(f, backend=backend)) == 0
