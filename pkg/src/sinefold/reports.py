"""Report containers and JSON serialisation helpers."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

import mpmath
import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class IdentityCheckReport:
    """Outcome of comparing the two sides of an identity.

    ``max_residual`` is the scaled residual the pass/fail decision uses;
    ``max_abs_residual`` is the raw |lhs - rhs|.
    """

    identity: str
    n: int
    max_abs_residual: float
    max_residual: float
    sample_count: int
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "n": self.n,
            "samples": self.sample_count,
            "max_residual": self.max_residual,
            "max_abs_residual": self.max_abs_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def make_report(identity: str, n: int, abs_residual: float, scale: float,
                tolerance: float, samples: int = 1) -> IdentityCheckReport:
    scaled = abs_residual / scale if scale > 0 else abs_residual
    return IdentityCheckReport(identity, n, float(abs_residual), float(scaled),
                               samples, tolerance, bool(scaled <= tolerance))


def merge_reports(reports: Iterable[IdentityCheckReport]) -> IdentityCheckReport:
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    first = reports[0]
    worst = max(reports, key=lambda r: r.max_residual)
    return IdentityCheckReport(
        identity=first.identity,
        n=max(r.n for r in reports),
        max_abs_residual=max(r.max_abs_residual for r in reports),
        max_residual=worst.max_residual,
        sample_count=sum(r.sample_count for r in reports),
        tolerance=first.tolerance,
        passed=all(r.passed for r in reports),
    )


def to_jsonable(obj: Any) -> Any:
    """Convert reports (dataclasses, Fractions, mpf, numpy scalars) to JSON types."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, 30)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if hasattr(obj, "value"):  # Enum
        return obj.value
    return str(obj)


def dumps(payload: Any) -> str:
    body = to_jsonable(payload)
    if isinstance(body, dict):
        body = {"schema_version": SCHEMA_VERSION, **body}
    return json.dumps(body, sort_keys=True, indent=2)
