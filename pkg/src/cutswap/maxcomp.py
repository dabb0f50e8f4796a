"""Max(R) for every row by three rounds of restricted partition refinement.

Max(R) is the LR-earliest row that precedes R in LR order and overlaps R.
The computation never materializes the row-by-column 0/1 matrix:

1. refine the full column set by every row in LR order, always splitting a
   part C into (C minus R)(C and R); the final partition orders columns
   lexicographically by their membership vectors;
2. record the leftmost and rightmost position of every row in that order and
   bucket rows by rightmost position, each bucket sorted by leftmost position;
3. refine again from the final order; whenever a row splits a part, the rows
   whose leftmost position falls before the split and whose rightmost
   position falls after it get that row as their Max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cutswap import _backend
from cutswap.errors import InternalInvariant
from cutswap.family import LROrder, SetFamily, lr_order

NONE = -1


class RestrictedPartition:
    """Ordered partition of all columns in a flat array.

    Parts are half-open position ranges ``[start[p], end[p])``. Refining by a
    row only ever splits a part into (untouched)(touched).
    """

    def __init__(self, elems):
        self.elems = list(elems)
        n = len(self.elems)
        self.pos = [0] * n
        for i, c in enumerate(self.elems):
            self.pos[c] = i
        self.part_of = [0] * n
        self.start = [0]
        self.end = [n]
        self._touched = [0]

    def __len__(self):
        return len(self.start)

    def refine(self, row, stable=False):
        """Refine every part by ``row``; return ``(last, new_part)`` per effective split.

        ``last`` is the final position of the untouched side. With ``stable``
        the touched elements must already sit at the right end of their part
        and nothing is moved.
        """
        elems, pos, part_of = self.elems, self.pos, self.part_of
        start, end, tcount = self.start, self.end, self._touched
        touched = []
        for x in row:
            p = part_of[x]
            t = tcount[p]
            if t == 0:
                touched.append(p)
            tcount[p] = t + 1
            if stable:
                continue
            dst = end[p] - 1 - t
            src = pos[x]
            y = elems[dst]
            elems[dst] = x
            elems[src] = y
            pos[x] = dst
            pos[y] = src
        if stable:
            for x in row:
                p = part_of[x]
                if pos[x] < end[p] - tcount[p]:
                    for q in touched:
                        tcount[q] = 0
                    raise InternalInvariant(f"column {x} is not right-aligned in its part")
        splits = []
        for p in touched:
            t = tcount[p]
            tcount[p] = 0
            if t == end[p] - start[p]:
                continue
            q = len(start)
            start.append(end[p] - t)
            end.append(end[p])
            tcount.append(0)
            end[p] -= t
            for k in range(start[q], end[q]):
                part_of[elems[k]] = q
            splits.append((end[p] - 1, q))
        return splits

    def canonicalize(self):
        """Reorder every part internally by ascending column index."""
        fill = list(self.start)
        for c in range(len(self.elems)):
            p = self.part_of[c]
            self.elems[fill[p]] = c
            self.pos[c] = fill[p]
            fill[p] += 1

    def parts(self):
        out = []
        i = 0
        n = len(self.elems)
        while i < n:
            p = self.part_of[self.elems[i]]
            out.append(self.elems[self.start[p]:self.end[p]])
            i = self.end[p]
        return out


def refine_step1(f: SetFamily, lr: LROrder | None = None) -> RestrictedPartition:
    """Refine the column set by every row in LR order; the result is P_f.

    Columns that end up in the same part (identical membership vectors) are
    ordered by column index.
    """
    lr = lr or lr_order(f)
    rows = f.rows
    pf = RestrictedPartition(range(f.n))
    for r in lr.order.tolist():
        pf.refine(rows[r])
    pf.canonicalize()
    return pf


@dataclass(frozen=True)
class BoundsMap:
    left: list
    right: list


def bounds(f: SetFamily, pf: RestrictedPartition) -> BoundsMap:
    pos = pf.pos
    left, right = [], []
    for r in f.rows:
        ps = [pos[c] for c in r]
        left.append(min(ps))
        right.append(max(ps))
    return BoundsMap(left, right)


class AMStructure:
    """For every position p, the rows with rightmost position p, by increasing leftmost position.

    Each bucket is a doubly linked list over row ids, so a named row is
    removed in constant time.
    """

    def __init__(self, n, m):
        self.head = [NONE] * n
        self.tail = [NONE] * n
        self.nxt = [NONE] * m
        self.prv = [NONE] * m
        self.slot = [NONE] * m

    def append(self, p, r):
        t = self.tail[p]
        self.prv[r] = t
        self.nxt[r] = NONE
        if t == NONE:
            self.head[p] = r
        else:
            self.nxt[t] = r
        self.tail[p] = r
        self.slot[r] = p

    def remove(self, r):
        p = self.slot[r]
        if p == NONE:
            return
        a, b = self.prv[r], self.nxt[r]
        if a == NONE:
            self.head[p] = b
        else:
            self.nxt[a] = b
        if b == NONE:
            self.tail[p] = a
        else:
            self.prv[b] = a
        self.slot[r] = NONE

    def front(self, p):
        r = self.head[p]
        return None if r == NONE else r

    def bucket(self, p):
        out = []
        r = self.head[p]
        while r != NONE:
            out.append(r)
            r = self.nxt[r]
        return out

    def __len__(self):
        return len(self.head)


def build_am(bnd: BoundsMap, lr: LROrder, n: int) -> AMStructure:
    m = len(bnd.left)
    am = AMStructure(n, m)
    by_left = [[] for _ in range(n)]
    for r in lr.order.tolist():
        by_left[bnd.left[r]].append(r)
    for bucket in by_left:
        for r in bucket:
            am.append(bnd.right[r], r)
    return am


@dataclass(frozen=True, eq=False)
class MaxTable:
    """``max_of[r]`` is Max(r), or -1 when no earlier row overlaps r."""

    max_of: np.ndarray

    def __getitem__(self, r):
        v = int(self.max_of[r])
        return None if v == NONE else v

    def __len__(self):
        return self.max_of.size

    def __eq__(self, other):
        if not isinstance(other, MaxTable):
            return NotImplemented
        return np.array_equal(self.max_of, other.max_of)

    def as_dict(self):
        return {r: self[r] for r in range(len(self))}


def compute_max(f: SetFamily, lr: LROrder | None = None, backend: str | None = None) -> MaxTable:
    lr = lr or lr_order(f)
    native = _backend.pick(backend)
    if native is not None:
        return MaxTable(native.compute_max(f.n, f.indptr, f.indices, lr.order, lr.rank))
    return MaxTable(np.asarray(_compute_max_py(f, lr), dtype=np.int64))


def _compute_max_py(f: SetFamily, lr: LROrder) -> list:
    rows = f.rows
    order = lr.order.tolist()
    rank = lr.rank.tolist()
    pf = refine_step1(f, lr)
    bnd = bounds(f, pf)
    am = build_am(bnd, lr, f.n)
    left = bnd.left
    head = am.head
    max_of = [NONE] * f.m
    part = RestrictedPartition(pf.elems)
    for r2 in order:
        # removed before refining so a row can never capture itself
        am.remove(r2)
        for last, q in part.refine(rows[r2], stable=True):
            for p in range(part.start[q], part.end[q]):
                r = head[p]
                while r != NONE and left[r] <= last:
                    if rank[r2] >= rank[r]:
                        raise InternalInvariant(f"row {r2} does not precede row {r}")
                    am.remove(r)
                    max_of[r] = r2
                    r = head[p]
    return max_of
