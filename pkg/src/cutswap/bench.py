"""Timing harness: doubling ladders on C1P instances and on star families."""

from __future__ import annotations

import time
from dataclasses import dataclass

from cutswap import _backend
from cutswap.family import GeneratorSpec, SetFamily, gen_family, star_family
from cutswap.refine import c1p_test

# mean row length 9 with lengths 2..16, and twice as many rows as columns
MIN_LEN, MAX_LEN = 2, 16


@dataclass
class BenchRow:
    label: str
    N: int
    m: int
    n: int
    seconds: float
    interval_total_length: int
    c1p: bool
    ratio: float | None = None

    def as_dict(self):
        return dict(self.__dict__)


def ladder_family(exp: int, seed: int = 1) -> SetFamily:
    """A c1p_positive family with roughly 2**exp total row length."""
    m = max(2, (1 << exp) // 9)
    n = max(MAX_LEN, m // 2)
    return gen_family(GeneratorSpec("c1p_positive", n, m, seed=seed, min_len=MIN_LEN, max_len=MAX_LEN))


def time_family(f: SetFamily, backend: str, repeats: int = 3):
    best, rep = float("inf"), None
    for _ in range(repeats):
        t = time.perf_counter()
        rep = c1p_test(f, backend=backend)
        best = min(best, time.perf_counter() - t)
    return best, rep


def _with_ratios(rows):
    for a, b in zip(rows, rows[1:]):
        b.ratio = b.seconds / a.seconds if a.seconds > 0 else None
    return rows


def run_ladder(exps, seed: int = 1, backend: str = "auto", repeats: int = 3) -> list[BenchRow]:
    rows = []
    for e in exps:
        f = ladder_family(e, seed)
        sec, rep = time_family(f, backend, repeats)
        rows.append(BenchRow(f"2^{e}", f.total_size, f.m, f.n, sec, rep.stats["interval_total_length"], rep.c1p))
    return _with_ratios(rows)


def run_star(ks, backend: str = "auto", repeats: int = 1) -> list[BenchRow]:
    """Star families {hub, x_i}: every pair overlaps and the interval mass is quadratic in k."""
    rows = []
    for k in ks:
        f = star_family(k)
        sec, rep = time_family(f, backend, repeats)
        rows.append(BenchRow(f"k={k}", f.total_size, f.m, f.n, sec, rep.stats["interval_total_length"], rep.c1p))
    return _with_ratios(rows)


def compare_backends(exps, seed: int = 1, repeats: int = 1) -> list[dict]:
    """Time both backends on the same families; requires the compiled core."""
    if not _backend.available():
        raise RuntimeError("compiled core is not built; only the Python backend is available")
    out = []
    for e in exps:
        f = ladder_family(e, seed)
        tn, rn = time_family(f, "native", repeats)
        tp, rp = time_family(f, "python", repeats)
        out.append({
            "label": f"2^{e}", "N": f.total_size,
            "native_s": tn, "python_s": tp, "speedup": tp / tn if tn > 0 else None,
            "agree": rn.c1p == rp.c1p,
        })
    return out


def format_table(rows: list[BenchRow]) -> str:
    head = f"{'size':>8} {'N':>9} {'m':>8} {'n':>8} {'seconds':>9} {'sum|I|':>11} {'ratio':>6} c1p"
    lines = [head]
    for r in rows:
        ratio = "" if r.ratio is None else f"{r.ratio:.2f}"
        lines.append(
            f"{r.label:>8} {r.N:>9} {r.m:>8} {r.n:>8} {r.seconds:>9.4f} "
            f"{r.interval_total_length:>11} {ratio:>6} {'yes' if r.c1p else 'no'}"
        )
    return "\n".join(lines)


def format_compare(rows: list[dict]) -> str:
    lines = [f"{'size':>8} {'N':>9} {'native s':>10} {'python s':>10} {'speedup':>8} agree"]
    for r in rows:
        lines.append(
            f"{r['label']:>8} {r['N']:>9} {r['native_s']:>10.4f} {r['python_s']:>10.4f} "
            f"{r['speedup']:>8.1f} {'yes' if r['agree'] else 'NO'}"
        )
    return "\n".join(lines)
