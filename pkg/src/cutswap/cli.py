"""Command-line front end.

Exit status: 0 when the family has the consecutive ones property, 1 when it
does not, 2 for usage, input or internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from cutswap import _backend, bench, oracle
from cutswap.errors import CutswapError, TooLarge
from cutswap.family import GeneratorSpec, SetFamily, gen_family, lr_order, parse_family, render_family
from cutswap.maxcomp import compute_max, refine_step1
from cutswap.refine import FamilyReport, c1p_test
from cutswap.report import to_json

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _read(path: str) -> SetFamily:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_family(text)


def _colour(text: str, ok: bool, stream) -> str:
    if os.environ.get("NO_COLOR") is not None or not stream.isatty():
        return text
    return f"\033[{32 if ok else 31}m{text}\033[0m"


def verdict_line(report: FamilyReport) -> str:
    if report.c1p:
        return "C1P"
    bad = report.failing()[0]
    return f"not C1P (class {bad.class_id} fails at row {bad.fail.row})"


def _exit(report: FamilyReport) -> int:
    return EXIT_YES if report.c1p else EXIT_NO


def cmd_check(args, out) -> int:
    f = _read(args.file)
    rep = c1p_test(f, backend=args.backend)
    if args.json:
        print(to_json(rep, timing=args.timing), file=out)
        return _exit(rep)
    print(_colour(verdict_line(rep), rep.c1p, out), file=out)
    if args.verbose:
        unused = [f.columns[c] for c in f.unused_columns()]
        print(f"n={f.n} m={f.m} N={f.total_size} classes={rep.class_count} "
              f"singletons={len(rep.singletons)} sum|I|={rep.stats['interval_total_length']} "
              f"swaps={rep.stats['swap_count']}", file=out)
        if unused:
            print("unused columns: " + " ".join(unused), file=out)
        for c in rep.failing():
            print(f"class {c.class_id}: row {c.fail.row}: {c.fail.reason}", file=out)
    return _exit(rep)


def cmd_classes(args, out) -> int:
    f = _read(args.file)
    rep = c1p_test(f, backend=args.backend)
    if args.json:
        print(to_json(rep, timing=args.timing), file=out)
        return _exit(rep)
    for c in rep.classes:
        tag = "C1P" if c.c1p else f"fails at row {c.fail.row}"
        print(f"class {c.class_id}: " + " ".join(map(str, c.rows)) + f"  [{tag}]", file=out)
    print("singletons:" + "".join(f" {r}" for r in rep.singletons), file=out)
    return _exit(rep)


def cmd_order(args, out) -> int:
    f = _read(args.file)
    rep = c1p_test(f, backend=args.backend)
    if args.json:
        print(to_json(rep, timing=args.timing), file=out)
        return _exit(rep)
    for c in rep.classes:
        print(f"class {c.class_id}: " + " ".join(map(str, c.order)), file=out)
    return _exit(rep)


def cmd_max(args, out) -> int:
    f = _read(args.file)
    mx = compute_max(f, backend=args.backend)
    if args.json:
        print(json.dumps([mx[r] for r in range(f.m)], separators=(",", ":")), file=out)
        return EXIT_YES
    for r in range(f.m):
        v = mx[r]
        print(f"{r} -> {'none' if v is None else v}", file=out)
    return EXIT_YES


def cmd_gen(args, out) -> int:
    mode = "uniform_random" if args.uniform else "c1p_positive"
    spec = GeneratorSpec(mode, args.cols, args.rows, seed=args.seed, min_len=args.min_len, max_len=args.max_len)
    text = render_family(gen_family(spec))
    out.write(text + ("\n" if text else ""))
    return EXIT_YES


def cmd_bench(args, out) -> int:
    if args.compare:
        exps = range(args.min_exp, args.max_exp + 1)
        rows = bench.compare_backends(exps, seed=args.seed, repeats=args.repeats)
        print(json.dumps(rows) if args.json else bench.format_compare(rows), file=out)
        return EXIT_YES
    if args.adversarial:
        ks = [1 << e for e in range(args.min_exp, args.max_exp + 1)]
        rows = bench.run_star(ks, backend=args.backend, repeats=args.repeats)
    else:
        rows = bench.run_ladder(range(args.min_exp, args.max_exp + 1), seed=args.seed,
                                backend=args.backend, repeats=args.repeats)
    if args.json:
        print(json.dumps([r.as_dict() for r in rows]), file=out)
    else:
        print(bench.format_table(rows), file=out)
    return EXIT_YES


def differential_battery(f: SetFamily) -> list[tuple[str, str]]:
    """Run every brute-force cross-check on one family; each result is pass, FAIL or skip."""
    res = []

    def put(name, ok):
        res.append((name, "pass" if ok else "FAIL"))

    lr = lr_order(f)
    rep = c1p_test(f, backend="python")
    try:
        put("verdict = brute_c1p", rep.c1p == oracle.brute_c1p(f))
    except TooLarge:
        res.append(("verdict = brute_c1p", "skip"))
    graph = oracle.brute_overlap_classes(f)
    want = sorted(sorted(g) for g in graph.components() if len(g) > 1)
    put("classes = overlap components", sorted(c.rows for c in rep.classes) == want)
    put("swap overlap orders", all(oracle.check_swap_order(f, c.rows, c.order) for c in rep.classes))
    mx = compute_max(f, lr, backend="python")
    put("max = brute_max", [mx[r] for r in range(f.m)] == oracle.brute_max(f, lr))
    put("max neighbourhood property", oracle.check_lemma1(f, lr, mx))
    put("witness", all(oracle.check_witness(f, c.rows, c.parts) for c in rep.classes if c.c1p))
    put("lexicographic column order", oracle.check_lexicographic(f, lr, refine_step1(f, lr).parts()))
    if _backend.available():
        nat = c1p_test(f, backend="native")
        same = nat.c1p == rep.c1p and [
            (c.rows, c.order, c.c1p, c.parts) for c in nat.classes
        ] == [(c.rows, c.order, c.c1p, c.parts) for c in rep.classes]
        put("native = python", same)
    else:
        res.append(("native = python", "skip"))
    return res


def cmd_oracle_check(args, out) -> int:
    f = _read(args.file)
    res = differential_battery(f)
    if args.json:
        print(json.dumps(dict(res), separators=(",", ":")), file=out)
    else:
        width = max(len(k) for k, _ in res)
        for k, v in res:
            print(f"{k:<{width}}  {_colour(v, v != 'FAIL', out)}", file=out)
    return EXIT_NO if any(v == "FAIL" for _, v in res) else EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cutswap", description="Consecutive ones property checker.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def with_file(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file", help="rows file, or - for standard input")
        s.add_argument("--json", action="store_true", help="single-line JSON output")
        s.add_argument("--backend", choices=_backend.BACKENDS, default=None)
        return s

    s = with_file("check", "decide C1P")
    s.add_argument("--timing", action="store_true", help="include elapsed_ms in JSON")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_check)
    s = with_file("classes", "list overlap classes")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(func=cmd_classes)
    s = with_file("order", "print the swap overlap order of every class")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(func=cmd_order)
    with_file("max", "print Max(row) for every row").set_defaults(func=cmd_max)

    s = sub.add_parser("oracle-check", help="cross-check one family against brute force")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_oracle_check)

    s = sub.add_parser("gen", help="generate a rows file on standard output")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--c1p", action="store_true", help="rows are windows of a hidden permutation (default)")
    g.add_argument("--uniform", action="store_true", help="rows are uniform random subsets")
    s.add_argument("--cols", type=int, required=True)
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--min-len", type=int, default=1)
    s.add_argument("--max-len", type=int, default=None)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="doubling-size timing ladder")
    s.add_argument("--min-exp", type=int, default=16)
    s.add_argument("--max-exp", type=int, default=22)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--repeats", type=int, default=3)
    s.add_argument("--backend", choices=_backend.BACKENDS, default=None)
    s.add_argument("--adversarial", action="store_true",
                   help="star families with 2**exp rows; interval mass grows quadratically")
    s.add_argument("--compare", action="store_true", help="time the native and Python backends side by side")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES
    try:
        return args.func(args, out)
    except (CutswapError, OSError, RuntimeError) as e:
        print(f"cutswap: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
