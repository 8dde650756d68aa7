"""Machine-readable reports: deterministic JSON and pandas CSV tables."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import pandas as pd

from algebra.series import ExtOrder, RingSpec, TruncatedSeries, format_series
from algebra.subspace import IdealSpec, ModuleSpec


@dataclass
class Report:
    command: str
    ring: RingSpec | None
    params: dict[str, Any] = field(default_factory=dict)
    result: Any = None
    certified_up_to: int | None = None
    seed: int | None = None
    warnings: list[str] = field(default_factory=list)
    # informational remarks, such as results that are cited rather than checked
    notes: list[str] = field(default_factory=list)
    # rows for --format csv; None when the result is not table-shaped
    table: list[dict[str, Any]] | None = None


def to_jsonable(value: Any) -> Any:
    """Plain JSON values; series print canonically and rationals as 'p/q'."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, ExtOrder):
        return value.to_json()
    if isinstance(value, TruncatedSeries):
        return format_series(value)
    if isinstance(value, RingSpec):
        return value.to_dict()
    if isinstance(value, (IdealSpec, ModuleSpec)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def report_payload(report: Report) -> dict[str, Any]:
    return {
        "command": report.command,
        "ring": to_jsonable(report.ring),
        "params": to_jsonable(report.params),
        "result": to_jsonable(report.result),
        "certified_up_to": report.certified_up_to,
        "seed": report.seed,
        "warnings": list(report.warnings),
        "notes": list(report.notes),
    }


def to_json(report: Report) -> str:
    return json.dumps(report_payload(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_csv(report: Report) -> str:
    """The report's table, or a one-row summary of the scalar result fields."""
    if report.table is not None:
        rows = [to_jsonable(row) for row in report.table]
    else:
        result = to_jsonable(report.result)
        if not isinstance(result, dict):
            result = {"result": result}
        rows = [{k: v for k, v in result.items() if not isinstance(v, (list, dict))}]
    df = pd.DataFrame(rows)
    if not df.empty:
        df = df[sorted(df.columns)]
    return df.to_csv(index=False, lineterminator="\n")


def error_payload(command: str, error: Exception, exit_code: int) -> str:
    payload = {
        "command": command,
        "error": {"type": type(error).__name__, "message": str(error), "exit_code": exit_code},
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(report)
    return to_json(report)
