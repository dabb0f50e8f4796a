import io
import json
import subprocess
import sys

import jsonschema
import pytest

from cutswap import GeneratorSpec, c1p_test, gen_family, parse_family, render_family
from cutswap.cli import main
from cutswap.report import load_schema, to_json

from conftest import DATA, F5_TEXT

F5 = str(DATA / "f5.rows")
EMPTY = str(DATA / "empty.rows")


def run(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_check_f5():
    assert run("check", F5) == (1, "not C1P (class 1 fails at row 4)\n")


def test_check_empty():
    assert run("check", EMPTY) == (0, "C1P\n")


def test_check_verbose_lists_unused(tmp_path):
    p = tmp_path / "x.rows"
    p.write_text("a b\n")
    code, text = run("check", "-v", str(p))
    assert code == 0 and "N=2" in text
    p.write_text(F5_TEXT)
    code, text = run("check", "-v", str(p))
    assert "untouched part between touched parts" in text


def test_check_stdin(monkeypatch):
    assert run("check", "-", stdin="a b\nb c\n", monkeypatch=monkeypatch)[0] == 0


def test_gen_pipe_check():
    gen = subprocess.run(
        [sys.executable, "-m", "cutswap", "gen", "--c1p", "--cols", "1000", "--rows", "2000", "--seed", "1"],
        capture_output=True, text=True, check=True,
    )
    chk = subprocess.run([sys.executable, "-m", "cutswap", "check", "-"], input=gen.stdout,
                         capture_output=True, text=True)
    assert chk.returncode == 0 and chk.stdout == "C1P\n"


def test_gen_uniform_deterministic():
    a = run("gen", "--uniform", "--cols", "20", "--rows", "30", "--seed", "5", "--min-len", "2", "--max-len", "6")
    b = run("gen", "--uniform", "--cols", "20", "--rows", "30", "--seed", "5", "--min-len", "2", "--max-len", "6")
    assert a == b and a[0] == 0
    f = parse_family(a[1])
    assert f.m == 30 and f.sizes.max() <= 6


def test_gen_bad_spec():
    assert run("gen", "--cols", "3", "--rows", "2", "--max-len", "5")[0] == 2


def test_json_report_f5():
    code, text = run("check", "--json", F5)
    assert code == 1
    doc = json.loads(text)
    jsonschema.validate(doc, load_schema())
    assert doc["classes"][0]["swap_order"] == [0, 1, 4, 3, 2]
    assert doc["classes"][0]["fail"] == {"row": 4, "reason": "untouched part between touched parts"}
    assert "elapsed_ms" not in doc["stats"]
    assert text.count("\n") == 1


def test_json_timing():
    doc = json.loads(run("check", "--json", "--timing", F5)[1])
    jsonschema.validate(doc, load_schema())
    assert doc["stats"]["elapsed_ms"] >= 0


def test_json_parts_use_column_names():
    f = gen_family(GeneratorSpec("c1p_positive", 40, 60, seed=2, min_len=2, max_len=8))
    doc = json.loads(to_json(c1p_test(f)))
    jsonschema.validate(doc, load_schema())
    assert doc["c1p"]
    flat = [c for cls in doc["classes"] for part in cls["parts"] for c in part]
    assert all(c.startswith("c") for c in flat)


def test_classes_and_order():
    code, text = run("classes", F5)
    assert code == 1
    assert text.splitlines() == ["class 1: 0 1 2 3 4  [fails at row 4]", "singletons:"]
    assert run("order", F5) == (1, "class 1: 0 1 4 3 2\n")


def test_max():
    assert run("max", F5) == (0, "0 -> 1\n1 -> none\n2 -> 3\n3 -> none\n4 -> 1\n")
    assert json.loads(run("max", "--json", F5)[1]) == [1, None, 3, None, 1]


def test_oracle_check():
    code, text = run("oracle-check", F5)
    assert code == 0
    assert "FAIL" not in text and text.count("pass") >= 7
    doc = json.loads(run("oracle-check", "--json", F5)[1])
    assert doc["verdict = brute_c1p"] == "pass"


def test_oracle_check_skips_brute_when_large(tmp_path):
    p = tmp_path / "big.rows"
    p.write_text(render_family(gen_family(GeneratorSpec("c1p_positive", 14, 10, seed=1, min_len=2, max_len=5))))
    doc = json.loads(run("oracle-check", "--json", str(p))[1])
    assert doc["verdict = brute_c1p"] == "skip"


@pytest.mark.parametrize("argv", [["bogus"], ["check"], ["check", "--nope", F5], []])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_input_errors(tmp_path, capsys):
    p = tmp_path / "bad.rows"
    p.write_text("a b\nc c\n")
    assert run("check", str(p))[0] == 2
    assert "line 2" in capsys.readouterr().err
    assert run("check", str(tmp_path / "missing.rows"))[0] == 2


def test_no_colour_off_tty(monkeypatch):
    # StringIO is not a terminal, so no escape codes either way
    monkeypatch.setenv("NO_COLOR", "1")
    assert "\033" not in run("check", F5)[1]


def test_bench_single_size():
    code, text = run("bench", "--min-exp", "10", "--max-exp", "10", "--repeats", "1", "--json")
    rows = json.loads(text)
    assert code == 0 and len(rows) == 1 and rows[0]["c1p"]


def test_bench_adversarial_reports_interval_mass():
    code, text = run("bench", "--adversarial", "--min-exp", "3", "--max-exp", "5", "--repeats", "1", "--json")
    rows = json.loads(text)
    mass = [r["interval_total_length"] for r in rows]
    sizes = [r["N"] for r in rows]
    # doubling k doubles N but roughly quadruples the interval mass
    assert sizes[1] == 2 * sizes[0]
    assert mass[2] / mass[1] > 3.5


def test_bench_compare():
    from cutswap import _backend
    if not _backend.available():
        pytest.skip("compiled core not built")
    code, text = run("bench", "--compare", "--min-exp", "10", "--max-exp", "11", "--repeats", "1")
    assert code == 0 and "speedup" in text


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "cutswap", "check", F5], capture_output=True, text=True)
    assert out.returncode == 1 and out.stdout == "not C1P (class 1 fails at row 4)\n"
