"""Ordered-partition refinement of one overlap class, with swaps.

The partition lives in a circular buffer sized to the class support. Parts
are contiguous ranges of *logical* positions; the physical cell of logical
position q is ``q % capacity``. The occupied window grows at either end when
a row brings columns not seen before.

A row that neither cuts the partition nor is needed yet (it is disjoint from
the embedded columns, inside one part, or contains them all) is deferred
behind the next row, which is refined first.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from cutswap.errors import InternalInvariant, InvalidOrder
from cutswap.family import SetFamily

DISJOINT = "disjoint"
INSIDE_ONE_PART = "inside-one-part"
CONTAINS_ALL_PARTS = "contains-all-parts"

GAP, PARTIAL, NOT_AT_EXTREMITY = 1, 2, 3
REASONS = {
    GAP: "untouched part between touched parts",
    PARTIAL: "partially touched part inside the touched block",
    NOT_AT_EXTREMITY: "touched block not at an extremity",
}


@dataclass(frozen=True)
class NoCut:
    reason: str


@dataclass(frozen=True)
class Cut:
    pass


@dataclass(frozen=True)
class Fail:
    row: int
    code: int

    @property
    def reason(self):
        return REASONS[self.code]


RefineOutcome = Union[NoCut, Cut, Fail]


@dataclass
class CutPlan:
    """Result of marking a row that cuts: which parts it touches and how."""

    row: int
    case: str  # "a": every column already embedded, "b": some are new
    touched: dict  # part id -> touched columns, in row order
    fresh: list  # columns of the row not yet embedded


class PartitionArray:
    def __init__(self, capacity: int):
        self.capacity = capacity
        self.cells = [-1] * capacity
        self.cell_part = [-1] * capacity
        self.loc = {}  # column -> logical position
        self.lo = []  # part id -> first logical position
        self.hi = []  # part id -> one past last logical position
        self.wlo = 0
        self.whi = 0

    # -- inspection -------------------------------------------------------

    def __len__(self):
        return self.whi - self.wlo

    def part_at(self, q):
        return self.cell_part[q % self.capacity]

    def size(self, p):
        return self.hi[p] - self.lo[p]

    def part_ids(self):
        out = []
        q = self.wlo
        while q < self.whi:
            p = self.part_at(q)
            out.append(p)
            q = self.hi[p]
        return out

    def parts(self):
        """Parts left to right, each as its columns in ascending index order."""
        s = self.capacity
        return [sorted(self.cells[q % s] for q in range(self.lo[p], self.hi[p])) for p in self.part_ids()]

    def state(self):
        return (tuple(self.cells), tuple(self.cell_part), tuple(self.lo), tuple(self.hi), self.wlo, self.whi)

    def check(self):
        """Assert the structural invariants (tests only; linear in the window)."""
        if not 0 <= self.whi - self.wlo <= self.capacity:
            raise InternalInvariant("window exceeds capacity")
        q = self.wlo
        for p in self.part_ids():
            if self.lo[p] != q or self.hi[p] <= q:
                raise InternalInvariant(f"part {p} does not tile the window")
            for k in range(self.lo[p], self.hi[p]):
                if self.part_at(k) != p or self.loc[self.cells[k % self.capacity]] != k:
                    raise InternalInvariant(f"cell {k} inconsistent")
            q = self.hi[p]
        if q != self.whi or len(self.loc) != self.whi - self.wlo:
            raise InternalInvariant("parts do not cover the window")

    # -- mutation ---------------------------------------------------------

    def _place(self, x, q, p):
        k = q % self.capacity
        self.cells[k] = x
        self.cell_part[k] = p
        self.loc[x] = q

    def _new_part(self, lo, hi):
        self.lo.append(lo)
        self.hi.append(hi)
        p = len(self.lo) - 1
        s = self.capacity
        for q in range(lo, hi):
            self.cell_part[q % s] = p
        return p

    def _split(self, p, cols, to_right):
        """Move ``cols`` (all in part p) to one end of p and make them a new part."""
        s = self.capacity
        cells, loc = self.cells, self.loc
        for i, x in enumerate(cols):
            dst = self.hi[p] - 1 - i if to_right else self.lo[p] + i
            src = loc[x]
            y = cells[dst % s]
            cells[dst % s] = x
            cells[src % s] = y
            loc[x] = dst
            loc[y] = src
        k = len(cols)
        if to_right:
            self.hi[p] -= k
            return self._new_part(self.hi[p], self.hi[p] + k)
        self.lo[p] += k
        return self._new_part(self.lo[p] - k, self.lo[p])

    def _grow(self, cols, at_right):
        k = len(cols)
        if self.whi - self.wlo + k > self.capacity:
            raise InternalInvariant("partition outgrew the class support")
        if at_right:
            lo = self.whi
            self.whi += k
        else:
            self.wlo -= k
            lo = self.wlo
        p = self._new_part(lo, lo + k)
        for i, x in enumerate(cols):
            self._place(x, lo + i, p)

    def _walk_from(self, at_right, touched):
        """Collect touched parts from one extremity inward.

        Returns ``(count, partial_part, stopped_on)`` where ``stopped_on`` is
        "partial", "untouched" or "end".
        """
        cur = self.part_at(self.whi - 1 if at_right else self.wlo)
        count = 0
        while True:
            cols = touched.get(cur)
            if cols is None:
                return count, None, "untouched"
            count += 1
            if len(cols) < self.size(cur):
                return count, cur, "partial"
            edge = self.lo[cur] if at_right else self.hi[cur]
            if edge == (self.wlo if at_right else self.whi):
                return count, None, "end"
            cur = self.part_at(edge - 1 if at_right else edge)


def init_partition(first_row, capacity: int | None = None) -> PartitionArray:
    first_row = list(first_row)
    pa = PartitionArray(len(first_row) if capacity is None else capacity)
    pa._grow(first_row, at_right=True)
    return pa


def classify(pa: PartitionArray, row, row_id: int = -1) -> NoCut | CutPlan:
    """Decide whether ``row`` cuts the partition; never mutates it."""
    loc, part_of = pa.loc, pa.part_at
    touched: dict = {}
    fresh = []
    embedded = 0
    for x in row:
        q = loc.get(x)
        if q is None:
            fresh.append(x)
            continue
        embedded += 1
        touched.setdefault(part_of(q), []).append(x)
    if embedded == 0:
        return NoCut(DISJOINT)
    if not fresh and len(touched) == 1:
        return NoCut(INSIDE_ONE_PART)
    if embedded == len(pa):
        return NoCut(CONTAINS_ALL_PARTS)
    return CutPlan(row_id, "b" if fresh else "a", touched, fresh)


def apply_refine(pa: PartitionArray, plan: CutPlan) -> Cut | Fail:
    touched = plan.touched
    if plan.case == "a":
        lo = pa.lo
        left = min(touched, key=lo.__getitem__)
        right = max(touched, key=lo.__getitem__)
        cur = left
        while cur != right:
            cur = pa.part_at(pa.hi[cur])
            cols = touched.get(cur)
            if cols is None:
                return Fail(plan.row, GAP)
            if cur != right and len(cols) < pa.size(cur):
                return Fail(plan.row, PARTIAL)
        if len(touched[left]) < pa.size(left):
            pa._split(left, touched[left], to_right=True)
        if len(touched[right]) < pa.size(right):
            pa._split(right, touched[right], to_right=False)
        return Cut()

    t = len(touched)
    walks = {}
    for at_right in (True, False):
        count, partial, stopped = walks[at_right] = pa._walk_from(at_right, touched)
        if count == t:
            if partial is not None:
                pa._split(partial, touched[partial], to_right=at_right)
            pa._grow(plan.fresh, at_right)
            return Cut()
    for at_right in (True, False):
        count, partial, stopped = walks[at_right]
        if count:
            return Fail(plan.row, PARTIAL if stopped == "partial" else GAP)
    return Fail(plan.row, NOT_AT_EXTREMITY)


def refine_row(pa: PartitionArray, row, row_id: int = -1) -> RefineOutcome:
    plan = classify(pa, row, row_id)
    if isinstance(plan, NoCut):
        return plan
    return apply_refine(pa, plan)


@dataclass
class ClassReport:
    class_id: int
    rows: list
    order: list
    c1p: bool
    parts: list | None = None  # column indices per part, when c1p
    fail: Fail | None = None
    swap_count: int = 0
    trace: list | None = None  # (row, outcome, parts) after each refinement

    def witness(self) -> list:
        return [c for part in self.parts for c in part]


def swap_partition_class(f: SetFamily, order, class_id: int = 0, trace: bool = False) -> ClassReport:
    """Refine a class's rows in ``order``, deferring a non-cutting row behind its successor."""
    order = [int(r) for r in order]
    rows = f.rows
    support = set()
    for r in order:
        support.update(rows[r])
    pa = init_partition(rows[order[0]], len(support))
    log = [(order[0], Cut(), pa.parts())] if trace else None
    report = ClassReport(class_id, sorted(order), order, True, trace=log)

    def step(r):
        out = refine_row(pa, rows[r], r)
        if trace:
            log.append((r, out, None if isinstance(out, Fail) else pa.parts()))
        return out

    k = len(order)
    j = 1
    while j < k:
        r = order[j]
        out = step(r)
        if isinstance(out, NoCut):
            if j + 1 >= k:
                raise InvalidOrder(f"row {r} cuts nothing and is last in class {class_id}")
            nxt = order[j + 1]
            out = step(nxt)
            if isinstance(out, NoCut):
                raise InvalidOrder(f"row {nxt} swapped in for row {r} cuts nothing")
            if isinstance(out, Cut):
                out = step(r)
                if isinstance(out, NoCut):
                    raise InvalidOrder(f"deferred row {r} still cuts nothing after row {nxt}")
            report.swap_count += 1
            j += 2
        else:
            j += 1
        if isinstance(out, Fail):
            report.c1p = False
            report.fail = out
            return report
    report.parts = pa.parts()
    return report


@dataclass
class FamilyReport:
    """Verdict for a whole family plus per-class detail.

    ``classes`` is built on first access, so large runs pay for Python
    objects only when they are inspected.
    """

    c1p: bool
    n: int
    m: int
    total_size: int
    class_count: int
    singletons: list
    stats: dict
    columns: tuple = ()
    _build: object = field(default=None, repr=False)
    _classes: list | None = field(default=None, repr=False)

    @property
    def classes(self) -> list:
        if self._classes is None:
            self._classes = self._build() if self._build else []
        return self._classes

    def failing(self) -> list:
        return [c for c in self.classes if not c.c1p]


def c1p_test(f: SetFamily, backend: str | None = None) -> FamilyReport:
    """Decide whether ``f`` has the consecutive ones property."""
    from cutswap import _backend
    from cutswap.family import lr_order, sl_lists
    from cutswap.maxcomp import compute_max
    from cutswap.overlap import build_intervals, classes_and_orders

    t0 = time.perf_counter()
    native = _backend.pick(backend)
    lr = lr_order(f)
    if native is not None:
        sl_ptr, sl_rows = native.sl_lists(f.n, f.indptr, f.indices, lr.order)
        max_of = native.compute_max(f.n, f.indptr, f.indices, lr.order, lr.rank)
        istart, iend, ikind, _, ti_ptr, ti_mcount, ti_occ = native.build_intervals(
            f.m, sl_ptr, sl_rows, lr.rank, max_of
        )
        label, emitted, cptr = native.classes_and_orders(
            f.m, sl_rows, istart, iend, ikind, ti_ptr, ti_mcount, ti_occ, lr.order, max_of
        )
        ok, fail_row, fail_code, swaps, pcols, pptr, cpp = native.swap_partition(
            f.n, f.indptr, f.indices, emitted, cptr
        )
        interval_mass = int((iend - istart).sum())
        nc = cptr.size - 1
        verdict = bool(ok.all())
        swap_count = int(swaps.sum())

        def build():
            out = []
            for k in range(nc):
                order = emitted[cptr[k]:cptr[k + 1]].tolist()
                rep = ClassReport(k + 1, sorted(order), order, bool(ok[k]), swap_count=int(swaps[k]))
                if rep.c1p:
                    rep.parts = [pcols[pptr[p]:pptr[p + 1]].tolist() for p in range(cpp[k], cpp[k + 1])]
                else:
                    rep.fail = Fail(int(fail_row[k]), int(fail_code[k]))
                out.append(rep)
            return out
    else:
        sl = sl_lists(f, lr, backend="python")
        mx = compute_max(f, lr, backend="python")
        ivs, ti = build_intervals(f, lr, sl, mx, backend="python")
        labels, order = classes_and_orders(ti, ivs, sl, lr, mx, backend="python")
        label = labels.label
        reports = [swap_partition_class(f, o, k) for k, o in enumerate(order, start=1)]
        interval_mass = ivs.total_length
        nc = labels.count
        verdict = all(r.c1p for r in reports)
        swap_count = sum(r.swap_count for r in reports)
        build = lambda: reports
    elapsed = (time.perf_counter() - t0) * 1000.0
    return FamilyReport(
        c1p=verdict,
        n=f.n,
        m=f.m,
        total_size=f.total_size,
        class_count=nc,
        singletons=np.flatnonzero(label == 0).tolist(),
        stats={"interval_total_length": interval_mass, "swap_count": swap_count, "elapsed_ms": elapsed},
        columns=f.columns,
        _build=build,
    )
