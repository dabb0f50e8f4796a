"""Overlap classes and a swap overlap order for each class.

For every column c and every row R in SL(c) with Max(R) defined, the
contiguous slice of SL(c) that starts at R and runs while rows are not
LR-earlier than Max(R) is an *interval*. All rows of an interval lie in one
overlap class. An interval is of kind M when its last row is Max(R) itself
and of kind E otherwise.

Exploring intervals from a start row, taking M intervals before E intervals
in each row's bucket, labels one class at a time and emits its rows in an
order where every row overlaps an earlier one, or its successor does and it
overlaps that successor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from cutswap import _backend
from cutswap.errors import InternalInvariant
from cutswap.family import LROrder, SetFamily, SLLists
from cutswap.maxcomp import NONE, MaxTable

KIND_M = 0
KIND_E = 1
KIND_NAMES = ("M", "E")


class Interval(NamedTuple):
    id: int
    column: int
    start: int  # offsets into SLLists.rows
    end: int
    kind: int

    def members(self, sl: SLLists) -> list:
        return sl.rows[self.start:self.end].tolist()

    def __len__(self):
        return self.end - self.start

    @property
    def kind_name(self):
        return KIND_NAMES[self.kind]


@dataclass(frozen=True, eq=False)
class Intervals:
    start: np.ndarray
    end: np.ndarray
    kind: np.ndarray
    column: np.ndarray

    def __len__(self):
        return self.start.size

    def __getitem__(self, i) -> Interval:
        return Interval(i, int(self.column[i]), int(self.start[i]), int(self.end[i]), int(self.kind[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def total_length(self) -> int:
        return int((self.end - self.start).sum())


class TITable:
    """Per row, the intervals containing it: M occurrences first, then E occurrences.

    Removing an interval is a constant-time flag; each bucket keeps a cursor
    that skips removed entries, so every occurrence is stepped over once.
    """

    def __init__(self, ptr, mcount, occ, n_intervals):
        self.ptr = list(ptr)
        m = len(self.ptr) - 1
        self.mend = [self.ptr[r] + int(mcount[r]) for r in range(m)]
        self.occ = list(occ)
        self.removed = [False] * n_intervals
        self.mcur = self.ptr[:-1]
        self.ecur = list(self.mend)
        self.live = n_intervals

    @property
    def m(self):
        return len(self.ptr) - 1

    def remove(self, i):
        if self.removed[i]:
            raise InternalInvariant(f"interval {i} removed twice")
        self.removed[i] = True
        self.live -= 1

    def next_m(self, r):
        k, stop = self.mcur[r], self.mend[r]
        occ, removed = self.occ, self.removed
        while k < stop and removed[occ[k]]:
            k += 1
        self.mcur[r] = k
        return occ[k] if k < stop else None

    def next_e(self, r):
        k, stop = self.ecur[r], self.ptr[r + 1]
        occ, removed = self.occ, self.removed
        while k < stop and removed[occ[k]]:
            k += 1
        self.ecur[r] = k
        return occ[k] if k < stop else None

    def is_empty(self, r):
        return self.next_m(r) is None and self.next_e(r) is None

    def cell(self, r):
        """Live (M ids, E ids) in row ``r``'s bucket, in insertion order."""
        occ, removed = self.occ, self.removed
        ms = [occ[k] for k in range(self.ptr[r], self.mend[r]) if not removed[occ[k]]]
        es = [occ[k] for k in range(self.mend[r], self.ptr[r + 1]) if not removed[occ[k]]]
        return ms, es


def build_intervals(f: SetFamily, lr: LROrder, sl: SLLists, mx: MaxTable, backend: str | None = None):
    """Return ``(Intervals, TITable)``; slices of a single row are dropped."""
    native = _backend.pick(backend)
    if native is not None:
        start, end, kind, col, ptr, mcount, occ = native.build_intervals(
            f.m, sl.ptr, sl.rows, lr.rank, mx.max_of
        )
        ivs = Intervals(start, end, kind, col)
        return ivs, TITable(ptr, mcount, occ, len(ivs))
    rank = lr.rank.tolist()
    max_of = mx.max_of.tolist()
    slr = sl.rows.tolist()
    bounds = sl.ptr.tolist()
    start, end, kind, col = [], [], [], []
    for c in range(len(sl)):
        lo, hi = bounds[c], bounds[c + 1]
        for i in range(lo, hi):
            mr = max_of[slr[i]]
            if mr == NONE:
                continue
            limit = rank[mr]
            j = i + 1
            while j < hi and rank[slr[j]] >= limit:
                j += 1
            if j - i < 2:
                continue
            start.append(i)
            end.append(j)
            kind.append(KIND_M if slr[j - 1] == mr else KIND_E)
            col.append(c)
    m = f.m
    mcount = [0] * m
    ecount = [0] * m
    for s, e, k in zip(start, end, kind):
        counts = mcount if k == KIND_M else ecount
        for r in slr[s:e]:
            counts[r] += 1
    ptr = [0] * (m + 1)
    for r in range(m):
        ptr[r + 1] = ptr[r] + mcount[r] + ecount[r]
    mfill = ptr[:-1]
    efill = [ptr[r] + mcount[r] for r in range(m)]
    occ = [0] * ptr[-1]
    for i, (s, e, k) in enumerate(zip(start, end, kind)):
        fill = mfill if k == KIND_M else efill
        for r in slr[s:e]:
            occ[fill[r]] = i
            fill[r] += 1
    as_arr = lambda v: np.asarray(v, dtype=np.int64)
    ivs = Intervals(as_arr(start), as_arr(end), as_arr(kind), as_arr(col))
    return ivs, TITable(ptr, mcount, occ, len(ivs))


@dataclass(frozen=True, eq=False)
class ClassLabeling:
    """``label[r]`` is the class id of row r (1-based) or 0 for rows that overlap nothing."""

    label: np.ndarray
    count: int

    def classes(self) -> list[list[int]]:
        out = [[] for _ in range(self.count)]
        for r, c in enumerate(self.label.tolist()):
            if c:
                out[c - 1].append(r)
        return out


@dataclass(frozen=True, eq=False)
class SwapOrder:
    """Emitted rows of all classes; class ``k`` owns ``rows[ptr[k-1]:ptr[k]]``."""

    rows: np.ndarray
    ptr: np.ndarray

    def __getitem__(self, class_id: int) -> list:
        return self.rows[self.ptr[class_id - 1]:self.ptr[class_id]].tolist()

    def __len__(self):
        return self.ptr.size - 1

    def __iter__(self):
        return (self[k] for k in range(1, len(self) + 1))


# worklist frame tags
_ROW, _MEMBERS, _EPOST = 0, 1, 2


def classes_and_orders(
    ti: TITable, ivs: Intervals, sl: SLLists, lr: LROrder, mx: MaxTable, backend: str | None = None
):
    """Label overlap classes and emit a swap overlap order per class.

    Consumes ``ti``. Class starts are taken in LR order among rows whose
    bucket still holds an M interval.
    """
    native = _backend.pick(backend)
    if native is not None:
        label, rows, ptr = native.classes_and_orders(
            ti.m, sl.rows, ivs.start, ivs.end, ivs.kind,
            np.asarray(ti.ptr, dtype=np.int64),
            np.asarray(ti.mend, dtype=np.int64) - np.asarray(ti.ptr[:-1], dtype=np.int64),
            np.asarray(ti.occ, dtype=np.int64), lr.order, mx.max_of,
        )
        ti.removed = [True] * len(ivs)
        ti.live = 0
        return ClassLabeling(label, ptr.size - 1), SwapOrder(rows, ptr)

    m = ti.m
    slr = sl.rows.tolist()
    istart = ivs.start.tolist()
    iend = ivs.end.tolist()
    max_of = mx.max_of.tolist()
    label = [0] * m
    emitted = []
    class_ptr = [0]
    nc = 0

    def emit(r):
        if label[r] == 0:
            label[r] = nc
            emitted.append(r)

    for l in lr.order.tolist():
        if ti.next_m(l) is None:
            continue
        nc += 1
        stack = [(_ROW, l, 0)]
        while stack:
            tag, a, b = stack.pop()
            if tag == _ROW:
                i = ti.next_m(a)
                if i is not None:
                    ti.remove(i)
                    s, e = istart[i], iend[i]
                    emit(slr[s])
                    emit(slr[e - 1])
                    for k in range(s + 1, e - 1):
                        emit(slr[k])
                    stack.append((_ROW, a, 0))
                    stack.append((_MEMBERS, i, s))
                    continue
                j = ti.next_e(a)
                if j is not None:
                    ti.remove(j)
                    # place First(J) and Max(First(J)) before draining First(J):
                    # row a overlaps one of them, so the pair keeps the order valid
                    first = slr[istart[j]]
                    emit(first)
                    emit(max_of[first])
                    stack.append((_ROW, a, 0))
                    stack.append((_EPOST, j, 0))
                    stack.append((_ROW, first, 0))
            elif tag == _MEMBERS:
                # recurse on members in slice order, skipping empty buckets
                e = iend[a]
                while b < e and ti.is_empty(slr[b]):
                    b += 1
                if b < e:
                    stack.append((_MEMBERS, a, b + 1))
                    stack.append((_ROW, slr[b], 0))
            else:
                s, e = istart[a], iend[a]
                if label[slr[s]] == 0:
                    raise InternalInvariant(f"first row {slr[s]} of E interval {a} unlabeled after drain")
                for k in range(s + 1, e):
                    emit(slr[k])
                stack.append((_MEMBERS, a, s + 1))
        class_ptr.append(len(emitted))
    if ti.live:
        raise InternalInvariant(f"{ti.live} intervals never processed")
    as_arr = lambda v: np.asarray(v, dtype=np.int64)
    return ClassLabeling(as_arr(label), nc), SwapOrder(as_arr(emitted), as_arr(class_ptr))


def singleton_rows(labels: ClassLabeling) -> list[int]:
    return np.flatnonzero(labels.label == 0).tolist()
