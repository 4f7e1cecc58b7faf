"""JSON and Markdown reports.  Both are deterministic functions of the results."""

from __future__ import annotations

import json

from ..checks import CheckResult

REPORT_VERSION = 1


def _entry(r: CheckResult) -> dict:
    return {
        "suite": r.suite,
        "params": {"n": r.params.get("n"), "k": r.params.get("k"), "m": r.params.get("m")},
        "status": r.status,
        "elapsed_ms": int(r.elapsed_ms),
        "terms": int(r.terms),
        "witness": r.witness,
    }


def summary(results: list[CheckResult]) -> dict:
    return {
        "pass": sum(r.status == "pass" for r in results),
        "fail": sum(r.status == "fail" for r in results),
    }


def to_json(config: dict, results: list[CheckResult]) -> str:
    doc = {
        "version": REPORT_VERSION,
        "config": config,
        "results": [_entry(r) for r in results],
        "summary": summary(results),
    }
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _cell(v) -> str:
    return "" if v is None else str(v).replace("|", "\\|")


def to_markdown(config: dict, results: list[CheckResult]) -> str:
    lines = ["# Verification report", ""]
    cfg = ", ".join(f"{k}={v}" for k, v in config.items())
    lines += [f"Configuration: {cfg}", ""]
    s = summary(results)
    others = len(results) - s["pass"] - s["fail"]
    lines += [f"Summary: {s['pass']} pass, {s['fail']} fail, {others} skipped or exploratory", ""]
    order: list[str] = []
    for r in results:
        if r.suite not in order:
            order.append(r.suite)
    for suite in order:
        lines += [f"## {suite}", "", "| n | k | m | status | elapsed_ms | terms | detail | witness |",
                  "|---|---|---|---|---|---|---|---|"]
        for r in results:
            if r.suite != suite:
                continue
            w = ""
            if r.witness:
                pt = ", ".join(f"{k}={v}" for k, v in r.witness.get("point", {}).items())
                w = f"lhs={r.witness.get('lhs')}; rhs={r.witness.get('rhs')}; at {pt}"
            p = r.params
            lines.append(
                f"| {_cell(p.get('n'))} | {_cell(p.get('k'))} | {_cell(p.get('m'))} | {r.status} | "
                f"{r.elapsed_ms} | {r.terms} | {_cell(r.detail)} | {_cell(w)} |"
            )
        lines.append("")
    return "\n".join(lines)
