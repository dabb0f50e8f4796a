"""JSON rendering of a FamilyReport.

Output is a single line with a fixed key order, so two runs on the same
input produce the same bytes. Wall-clock time is left out unless asked for.
"""

from __future__ import annotations

import json
from importlib import resources

from cutswap.refine import FamilyReport

SCHEMA_FILE = "report.schema.json"


def class_entry(rep, columns) -> dict:
    out = {
        "id": rep.class_id,
        "rows": list(rep.rows),
        "swap_order": list(rep.order),
        "c1p": rep.c1p,
    }
    if rep.c1p:
        out["parts"] = [[columns[c] for c in part] for part in rep.parts]
    else:
        out["fail"] = {"row": rep.fail.row, "reason": rep.fail.reason}
    return out


def to_dict(report: FamilyReport, timing: bool = False) -> dict:
    stats = {
        "interval_total_length": report.stats["interval_total_length"],
        "swap_count": report.stats["swap_count"],
    }
    if timing:
        stats["elapsed_ms"] = round(report.stats["elapsed_ms"], 3)
    return {
        "c1p": report.c1p,
        "n": report.n,
        "m": report.m,
        "total_size": report.total_size,
        "classes": [class_entry(c, report.columns) for c in report.classes],
        "singletons": list(report.singletons),
        "stats": stats,
    }


def to_json(report: FamilyReport, timing: bool = False) -> str:
    return json.dumps(to_dict(report, timing), separators=(",", ":"), ensure_ascii=False)


def load_schema() -> dict:
    return json.loads(resources.files("cutswap").joinpath(SCHEMA_FILE).read_text(encoding="utf-8"))
