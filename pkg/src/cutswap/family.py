"""Set families, the `.rows` text format, canonical row orders and generators."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from cutswap import _backend
from cutswap.errors import BadSpec, MalformedRow

_INDEX = np.int64


@dataclass(frozen=True, eq=False)
class SetFamily:
    """A family of rows over a table of named columns.

    Rows are stored in CSR form: row ``i`` is
    ``indices[indptr[i]:indptr[i + 1]]``, strictly ascending column indices.
    A row's position in the family is its original input index.
    """

    columns: tuple[str, ...]
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        indptr = np.ascontiguousarray(self.indptr, dtype=_INDEX)
        indices = np.ascontiguousarray(self.indices, dtype=_INDEX)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "columns", tuple(self.columns))
        if indptr.ndim != 1 or indptr.size == 0 or indptr[0] != 0:
            raise ValueError("indptr must start at 0")
        if indptr[-1] != indices.size:
            raise ValueError("indptr does not match indices")
        sizes = np.diff(indptr)
        if (sizes <= 0).any():
            raise ValueError("rows must be non-empty")
        if indices.size:
            if indices.min() < 0 or indices.max() >= len(self.columns):
                raise ValueError("column index out of range")
            step = np.diff(indices)
            inner = np.ones(indices.size - 1, dtype=bool)
            inner[indptr[1:-1] - 1] = False
            if (step[inner] <= 0).any():
                raise ValueError("rows must be strictly ascending")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], columns: Sequence[str] | int | None = None):
        """Build a family from rows of column indices (any order, no duplicates)."""
        rows = [sorted(r) for r in rows]
        for r in rows:
            if len(set(r)) != len(r):
                raise ValueError(f"duplicate column in row {r}")
        if columns is None:
            n = 1 + max((r[-1] for r in rows if r), default=-1)
            columns = [str(i) for i in range(n)]
        elif isinstance(columns, int):
            columns = [str(i) for i in range(columns)]
        indptr = np.zeros(len(rows) + 1, dtype=_INDEX)
        indptr[1:] = np.cumsum([len(r) for r in rows])
        indices = np.fromiter((c for r in rows for c in r), dtype=_INDEX, count=int(indptr[-1]))
        return cls(tuple(columns), indptr, indices)

    @classmethod
    def from_named_rows(cls, rows: Iterable[Iterable[str]]):
        """Build a family from rows of column names, interning names in first-appearance order."""
        return parse_family("\n".join(" ".join(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def m(self) -> int:
        return self.indptr.size - 1

    @property
    def total_size(self) -> int:
        return int(self.indptr[-1])

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def rows(self) -> list[tuple[int, ...]]:
        flat = self.indices.tolist()
        ptr = self.indptr.tolist()
        return [tuple(flat[ptr[i]:ptr[i + 1]]) for i in range(self.m)]

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def row_names(self, i: int) -> list[str]:
        return [self.columns[c] for c in self.rows[i]]

    def unused_columns(self) -> list[int]:
        used = np.zeros(self.n, dtype=bool)
        used[self.indices] = True
        return np.flatnonzero(~used).tolist()

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return (
            self.columns == other.columns
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.columns, self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self):
        return f"SetFamily(n={self.n}, m={self.m}, total_size={self.total_size})"


_COMMENT = re.compile(r"#.*")


def parse_family(text: str) -> SetFamily:
    """Parse the `.rows` format: one row per line, whitespace-separated tokens,
    ``#`` comments, blank lines ignored."""
    columns: dict[str, int] = {}
    indptr = [0]
    indices: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _COMMENT.sub("", line).split()
        if not tokens:
            continue
        row = []
        for tok in tokens:
            c = columns.get(tok)
            if c is None:
                c = columns[tok] = len(columns)
            row.append(c)
        row.sort()
        for a, b in zip(row, row[1:]):
            if a == b:
                raise MalformedRow(lineno)
        indices.extend(row)
        indptr.append(len(indices))
    return SetFamily(tuple(columns), np.asarray(indptr, dtype=_INDEX), np.asarray(indices, dtype=_INDEX))


def render_family(f: SetFamily) -> str:
    """Canonical `.rows` text: each row's tokens in column-index order."""
    cols = f.columns
    return "".join(" ".join(cols[c] for c in r) + "\n" for r in f.rows)


@dataclass(frozen=True, eq=False)
class LROrder:
    """Rows by non-increasing size, ties by ascending input index.

    ``order[p]`` is the row at position ``p``; ``rank[r]`` is the position of row ``r``.
    """

    order: np.ndarray
    rank: np.ndarray

    def __len__(self):
        return self.order.size

    def precedes(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]


def lr_order(f: SetFamily) -> LROrder:
    # a stable sort on the negated size keeps equal sizes in input order
    order = np.argsort(-f.sizes, kind="stable").astype(_INDEX)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size, dtype=_INDEX)
    return LROrder(order, rank)


@dataclass(frozen=True, eq=False)
class SLLists:
    """Per column, the rows containing it from LR-latest to LR-earliest."""

    ptr: np.ndarray
    rows: np.ndarray

    def __getitem__(self, c: int) -> np.ndarray:
        return self.rows[self.ptr[c]:self.ptr[c + 1]]

    def __len__(self):
        return self.ptr.size - 1


def sl_lists(f: SetFamily, lr: LROrder, backend: str | None = None) -> SLLists:
    native = _backend.pick(backend)
    if native is not None:
        ptr, rows = native.sl_lists(f.n, f.indptr, f.indices, lr.order)
        return SLLists(ptr, rows)
    # distribute rows into column buckets, visiting rows from LR-last to LR-first
    ptr = np.zeros(f.n + 1, dtype=_INDEX)
    np.cumsum(np.bincount(f.indices, minlength=f.n), out=ptr[1:])
    fill = ptr[:-1].tolist()
    out = [0] * f.total_size
    flat = f.indices.tolist()
    bounds = f.indptr.tolist()
    for r in reversed(lr.order.tolist()):
        for k in range(bounds[r], bounds[r + 1]):
            c = flat[k]
            out[fill[c]] = r
            fill[c] += 1
    return SLLists(ptr, np.asarray(out, dtype=_INDEX))


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for :func:`gen_family`.

    ``mode`` is ``"c1p_positive"`` (every row a window of one hidden column
    permutation) or ``"uniform_random"`` (every row a uniform subset).
    Row lengths are drawn uniformly from ``[min_len, max_len]``; ``max_len``
    defaults to ``min(n, 16)``.
    """

    mode: str
    n: int
    m: int
    seed: int = 0
    min_len: int = 1
    max_len: int | None = None

    def length_bounds(self) -> tuple[int, int]:
        hi = min(self.n, 16) if self.max_len is None else self.max_len
        return self.min_len, hi


MODES = ("c1p_positive", "uniform_random")


def gen_family(spec: GeneratorSpec) -> SetFamily:
    if spec.mode not in MODES:
        raise BadSpec(f"unknown mode {spec.mode!r}")
    if spec.n < 0 or spec.m < 0:
        raise BadSpec("n and m must be non-negative")
    lo, hi = spec.length_bounds()
    if spec.m and (lo < 1 or lo > hi or hi > spec.n):
        raise BadSpec(f"row lengths [{lo}, {hi}] infeasible for n={spec.n}")
    rng = np.random.default_rng(spec.seed)
    columns = tuple(f"c{i}" for i in range(spec.n))
    lengths = rng.integers(lo, hi + 1, size=spec.m, dtype=_INDEX) if spec.m else np.zeros(0, dtype=_INDEX)
    indptr = np.zeros(spec.m + 1, dtype=_INDEX)
    np.cumsum(lengths, out=indptr[1:])
    total = int(indptr[-1])
    if spec.mode == "c1p_positive":
        perm = rng.permutation(spec.n).astype(_INDEX)
        starts = rng.integers(0, spec.n - lengths + 1, dtype=_INDEX) if spec.m else lengths
        offsets = np.arange(total, dtype=_INDEX) - np.repeat(indptr[:-1], lengths)
        cells = perm[np.repeat(starts, lengths) + offsets]
    else:
        if spec.m * spec.n <= 1 << 22:
            # each row: the first k entries of an independent random permutation
            picks = np.argsort(rng.random((spec.m, spec.n)), axis=1)
            mask = np.arange(spec.n)[None, :] < lengths[:, None]
            cells = picks[mask].astype(_INDEX)
        else:
            cells = np.concatenate(
                [rng.choice(spec.n, int(k), replace=False) for k in lengths]
            ).astype(_INDEX)
    # sort within each row
    row_of = np.repeat(np.arange(spec.m, dtype=_INDEX), lengths)
    cells = cells[np.lexsort((cells, row_of))]
    return SetFamily(columns, indptr, cells)


def star_family(k: int) -> SetFamily:
    """k rows {hub, leaf_i}: every pair overlaps, interval mass grows as k^2."""
    rows = [(0, i + 1) for i in range(k)]
    return SetFamily.from_rows(rows, ["hub"] + [f"x{i}" for i in range(k)])
