"""Verification reports shared by every identity family."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .linear import is_scalar


class ResourceGuard(ValueError):
    """Parameters exceed the desk-scale limits of a check."""


@dataclass
class IdentityReport:
    family: str
    params: dict
    window: object
    residual_terms: int
    elapsed_ms: float = 0.0
    counterexample: str | None = None
    notes: dict = field(default_factory=dict)
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.residual_terms == 0 else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "family": self.family,
            "params": _jsonable(self.params),
            "status": self.status,
            "window": _jsonable(self.window),
            "residual_terms": self.residual_terms,
        }
        if self.counterexample:
            d["counterexample"] = self.counterexample
        if self.notes:
            d["notes"] = _jsonable(self.notes)
        if timings:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if is_scalar(x):
        return x if isinstance(x, int) else str(x)
    if isinstance(x, (str, bool)) or x is None:
        return x
    return str(x)


def count_terms(c) -> int:
    if is_scalar(c):
        return 0 if c == 0 else 1
    return len(c)


def residual_summary(res):
    """(term count, first offending coefficient as text) for a Series/BiSeries residual."""
    total = 0
    first = None
    for k in sorted(res.coeffs):
        c = res.coeffs[k]
        n = count_terms(c)
        if n and first is None:
            first = f"coefficient {k}: {c!r}"
            if len(first) > 400:
                first = first[:400] + "..."
        total += n
    return total, first


@contextmanager
def stopwatch():
    box = {"ms": 0.0}
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = (time.perf_counter() - t0) * 1000.0
