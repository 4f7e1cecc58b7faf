"""Outcome records shared by every verification suite."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra.ratfunc import RatFunc
from .algebra.univariate import rat_compare

STATUSES = ("pass", "fail", "skipped", "exploratory")


@dataclass
class CheckResult:
    suite: str
    params: dict
    status: str
    witness: dict | None = None
    elapsed_ms: int = 0
    terms: int = 0
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing check needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.status in ("pass", "skipped", "exploratory")


def params(n=None, k=None, m=None) -> dict:
    return {"n": n, "k": k, "m": m}


@contextmanager
def stopwatch():
    box = {"ms": 0}
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = int(round((time.perf_counter() - t0) * 1000))


def _fmt(v) -> str:
    if v is None:
        return "undefined"
    return str(Fraction(v))


def format_witness(w: dict | None) -> dict | None:
    """JSON-ready witness: point values and both side values as strings."""
    if w is None:
        return None
    return {
        "point": {k: _fmt(v) for k, v in sorted(w["point"].items())},
        "lhs": _fmt(w.get("lhs")),
        "rhs": _fmt(w.get("rhs")),
    }


def size_of(*values) -> int:
    total = 0
    for v in values:
        if isinstance(v, RatFunc):
            total += v.nterms
        elif hasattr(v, "nterms"):
            total += v.nterms
        elif hasattr(v, "terms"):
            total += len(v.terms)
    return total


def check_equal(suite: str, prm: dict, lhs, rhs, seed: int = 0, elapsed_ms: int = 0, detail: str = "") -> CheckResult:
    """Exact comparison of two rational functions packaged as a :class:`CheckResult`."""
    with stopwatch() as sw:
        ok, w = rat_compare(lhs, rhs, seed=seed)
    return CheckResult(
        suite,
        prm,
        "pass" if ok else "fail",
        witness=format_witness(w),
        elapsed_ms=elapsed_ms + sw["ms"],
        terms=size_of(lhs, rhs),
        detail=detail,
    )


def failure(suite: str, prm: dict, message: str, elapsed_ms: int = 0) -> CheckResult:
    """A failing result for a structural (non-pointwise) violation."""
    return CheckResult(
        suite, prm, "fail", witness={"point": {}, "lhs": message, "rhs": "expected"}, elapsed_ms=elapsed_ms, detail=message
    )
