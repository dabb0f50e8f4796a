"""Brute-force references, written straight from the definitions.

Nothing here shares code with the fast pipeline beyond the SetFamily
container. Rows are handled as Python int bitmasks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from cutswap.errors import TooLarge
from cutswap.family import LROrder, SetFamily

BRUTE_LIMIT = 9


def masks(f: SetFamily) -> list[int]:
    out = []
    for r in f.rows:
        m = 0
        for c in r:
            m |= 1 << c
        out.append(m)
    return out


def overlaps(a: int, b: int) -> bool:
    return bool(a & b) and bool(a & ~b) and bool(b & ~a)


def _consecutive(perm_pos, row) -> bool:
    ps = [perm_pos[c] for c in row]
    return max(ps) - min(ps) + 1 == len(ps)


def brute_c1p_naive(f: SetFamily) -> bool:
    """Try every permutation of the used columns (keeping one of each mirror pair)."""
    used = sorted({c for r in f.rows for c in r})
    if len(used) > BRUTE_LIMIT:
        raise TooLarge(len(used), BRUTE_LIMIT)
    for perm in itertools.permutations(used):
        if len(perm) > 1 and perm[0] > perm[-1]:
            continue
        pos = {c: i for i, c in enumerate(perm)}
        if all(_consecutive(pos, r) for r in f.rows):
            return True
    return not f.rows


def brute_c1p(f: SetFamily) -> bool:
    """Depth-first search over column permutations of the used columns.

    A prefix is abandoned as soon as some row has started but the next
    column is not in it (that row could no longer be an interval).
    """
    used = sorted({c for r in f.rows for c in r})
    if len(used) > BRUTE_LIMIT:
        raise TooLarge(len(used), BRUTE_LIMIT)
    rows = masks(f)
    full = 0
    for c in used:
        full |= 1 << c

    def extend(placed):
        if placed == full:
            return True
        open_rows = [r for r in rows if r & placed and r & ~placed]
        for c in used:
            bit = 1 << c
            if placed & bit:
                continue
            if all(r & bit for r in open_rows) and extend(placed | bit):
                return True
        return False

    return extend(0)


@dataclass(frozen=True)
class OverlapGraph:
    m: int
    edges: frozenset
    component: tuple  # row -> component id, ids numbered by smallest member

    def components(self) -> list[list[int]]:
        groups: dict = {}
        for r, c in enumerate(self.component):
            groups.setdefault(c, []).append(r)
        return list(groups.values())

    def neighbours(self, r):
        return {b if a == r else a for a, b in self.edges if r in (a, b)}


def brute_overlap_classes(f: SetFamily) -> OverlapGraph:
    ms = masks(f)
    m = len(ms)
    edges = set()
    adj = [[] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if overlaps(ms[i], ms[j]):
                edges.add((i, j))
                adj[i].append(j)
                adj[j].append(i)
    comp = [-1] * m
    for s in range(m):
        if comp[s] >= 0:
            continue
        comp[s] = s
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if comp[v] < 0:
                    comp[v] = s
                    stack.append(v)
    return OverlapGraph(m, frozenset(edges), tuple(comp))


def brute_max(f: SetFamily, lr: LROrder) -> list:
    """Per row, the LR-earliest strictly preceding row that overlaps it, else None."""
    ms = masks(f)
    order = lr.order.tolist()
    out = [None] * len(ms)
    for p, r in enumerate(order):
        for q in order[:p]:
            if overlaps(ms[q], ms[r]):
                out[r] = q
                break
    return out


def check_swap_order(f: SetFamily, class_rows, order) -> bool:
    """Every row after the first overlaps an earlier one, or its successor
    overlaps an earlier one and it overlaps that successor."""
    ms = masks(f)
    order = list(order)
    if sorted(order) != sorted(class_rows):
        return False
    k = len(order)

    def hits_earlier(x, upto):
        return any(overlaps(ms[x], ms[order[g]]) for g in range(upto))

    for l in range(1, k):
        if hits_earlier(order[l], l):
            continue
        if l + 1 < k and hits_earlier(order[l + 1], l) and overlaps(ms[order[l]], ms[order[l + 1]]):
            continue
        return False
    return True


def check_witness(f: SetFamily, class_rows, parts) -> bool:
    flat = [c for part in parts for c in part]
    if len(set(flat)) != len(flat):
        return False
    pos = {c: i for i, c in enumerate(flat)}
    for r in class_rows:
        row = f.rows[r]
        if any(c not in pos for c in row) or not _consecutive(pos, row):
            return False
    return True


def check_lemma1(f: SetFamily, lr: LROrder, max_table) -> bool:
    """For R with Max(R), every X meeting R with |R| <= |X| <= |Max(R)| overlaps R or Max(R)."""
    ms = masks(f)
    sizes = [len(r) for r in f.rows]
    for r in range(len(ms)):
        mr = max_table[r]
        if mr is None:
            continue
        for x in range(len(ms)):
            if ms[x] & ms[r] and sizes[r] <= sizes[x] <= sizes[mr]:
                if not (overlaps(ms[x], ms[r]) or overlaps(ms[x], ms[mr])):
                    return False
    return True


def boolean_matrix(f: SetFamily, lr: LROrder) -> np.ndarray:
    """Rows in LR order by columns; entry 1 when the column lies in the row."""
    bm = np.zeros((f.m, f.n), dtype=np.uint8)
    for p, r in enumerate(lr.order.tolist()):
        bm[p, list(f.rows[r])] = 1
    return bm


def check_lexicographic(f: SetFamily, lr: LROrder, parts) -> bool:
    """Columns read left to right across ``parts`` are lexicographically
    non-decreasing, and two columns are equal exactly when they share a part."""
    bm = boolean_matrix(f, lr)
    keys = []
    for k, part in enumerate(parts):
        for c in part:
            keys.append((tuple(bm[:, c].tolist()), k))
    for (a, pa), (b, pb) in zip(keys, keys[1:]):
        if a > b or (a == b) != (pa == pb):
            return False
    return True
