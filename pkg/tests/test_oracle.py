import pytest

from cutswap import SetFamily, compute_max, lr_order, refine_step1
from cutswap.errors import TooLarge
from cutswap.oracle import (
    boolean_matrix,
    brute_c1p,
    brute_c1p_naive,
    brute_max,
    brute_overlap_classes,
    check_lemma1,
    check_lexicographic,
    check_swap_order,
    check_witness,
    overlaps,
)

from conftest import R2, R3, R4, R5, R7

A, B, C, D, E = range(5)
ABC = SetFamily.from_rows([(A, B, C, D), (B, C), (A, B, E)], 5)


def test_overlap_definition():
    assert overlaps(0b011, 0b110)
    assert not overlaps(0b011, 0b001)  # containment
    assert not overlaps(0b011, 0b100)  # disjoint
    assert not overlaps(0b011, 0b011)  # equal


def test_brute_c1p_f5(f5):
    assert brute_c1p(f5) is False
    assert brute_c1p_naive(f5) is False


def test_brute_c1p_windows():
    f = SetFamily.from_rows([(0, 1, 2), (2, 3), (3, 4, 5), (1, 2, 3, 4)])
    assert brute_c1p(f) and brute_c1p_naive(f)


def test_brute_c1p_empty():
    assert brute_c1p(SetFamily.from_rows([], 0))
    assert brute_c1p_naive(SetFamily.from_rows([], 0))


def test_brute_c1p_guard():
    f = SetFamily.from_rows([tuple(range(10))])
    with pytest.raises(TooLarge):
        brute_c1p(f)
    # columns in no row do not count toward the guard
    assert brute_c1p(SetFamily.from_rows([(0, 1)], 20))


def test_brute_c1p_triangle():
    # three pairwise overlapping pairs on a 3-cycle cannot all be consecutive
    f = SetFamily.from_rows([(0, 1), (1, 2), (0, 2)])
    assert not brute_c1p(f)


def test_overlap_classes_f5(f5):
    g = brute_overlap_classes(f5)
    assert g.components() == [[R2, R3, R4, R5, R7]]
    assert g.neighbours(R7) == {R2, R3, R5}


def test_overlap_classes_trivial():
    assert brute_overlap_classes(SetFamily.from_rows([(0,), (1,)])).components() == [[0], [1]]
    chain = SetFamily.from_rows([(0, 1, 2, 3), (0, 1, 2), (0, 1), (0,)])
    assert len(brute_overlap_classes(chain).components()) == 4


def test_brute_max_f5(f5):
    assert brute_max(f5, lr_order(f5)) == [R3, None, R5, None, R3]


def test_brute_max_duplicates():
    f = SetFamily.from_rows([(0, 1), (0, 1)])
    assert brute_max(f, lr_order(f)) == [None, None]


def test_swap_order_checker(f5):
    assert check_swap_order(f5, range(5), [R2, R3, R7, R5, R4])
    assert check_swap_order(ABC, [0, 1, 2], [0, 1, 2])
    pair = SetFamily.from_rows([(A, B, C), (A, B)])
    assert not check_swap_order(pair, [0, 1], [0, 1])
    assert not check_swap_order(f5, range(5), [R2, R3])  # not a permutation


def test_witness_checker():
    assert check_witness(ABC, [0, 1, 2], [[E], [A], [B], [C], [D]])
    one = SetFamily.from_rows([(A, B)], 3)
    assert not check_witness(one, [0], [[A], [C], [B]])
    assert check_witness(one, [0], [[A, B]])


def test_max_neighbourhood_f5(f5):
    lr = lr_order(f5)
    assert check_lemma1(f5, lr, compute_max(f5, lr))


def test_max_neighbourhood_detects_wrong_table(f5):
    lr = lr_order(f5)
    bogus = [None, None, None, None, R4]  # R4 is disjoint from R7
    assert not check_lemma1(f5, lr, bogus)


def test_max_neighbourhood_vacuous():
    f = SetFamily.from_rows([(0,), (1,)])
    assert check_lemma1(f, lr_order(f), [None, None])


def test_boolean_matrix_and_lex_order(f5):
    lr = lr_order(f5)
    bm = boolean_matrix(f5, lr)
    assert bm.shape == (5, 7) and bm.sum() == 17
    assert check_lexicographic(f5, lr, refine_step1(f5, lr).parts())
    assert not check_lexicographic(f5, lr, [[c] for c in range(7)])
