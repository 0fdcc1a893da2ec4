from __future__ import annotations

import csv
import io
import json
import logging
import math
from enum import StrEnum
from pathlib import Path
from typing import TYPE_CHECKING, Any

from physiq.metrics import Metric

from .constants import (
    PHYSICAL_VARIANCE,
    REFERENCE_RESULTS,
    VARIANCE_LABEL,
)
from .scoring import EvalReport, ReportError
from .stats import mean_rank, mean_rank_table, spearman
from .variance import mean_values

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "model",
    "scenario_id",
    "category",
    "perspective",
    *(str(m) for m in Metric),
    "normalized_mean",
    "physics_iq",
)
SUMMARY_COLUMNS = (
    "model",
    *(str(m) for m in Metric),
    "physics_iq",
    "mean_rank",
)
# scenario_id of the trailing whole-report row in CSV reports
AGGREGATE_ROW = "all"


class ReportFormat(StrEnum):
    JSON = "json"
    CSV = "csv"

    @classmethod
    def for_path(cls, path: Path, fmt: str | None = None) -> ReportFormat:
        if fmt is not None:
            return cls(fmt)
        return cls.CSV if path.suffix == ".csv" else cls.JSON


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def _csv_text(columns: Sequence[str], rows: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _report_rows(report: EvalReport) -> list[dict[str, Any]]:
    rows = []
    for s in report.scenarios:
        values = s.values or {}
        rows.append(
            {
                "model": report.model,
                "scenario_id": s.scenario_id,
                "category": str(s.category),
                "perspective": str(s.perspective),
                **{str(m): _fmt(values.get(m)) for m in Metric},
                "normalized_mean": _fmt(s.normalized_mean),
                "physics_iq": _fmt(100.0 * s.normalized_mean),
            }
        )
    means = report.metric_means()
    overall = math.fsum(s.normalized_mean for s in report.scenarios) / len(
        report.scenarios
    )
    rows.append(
        {
            "model": report.model,
            "scenario_id": AGGREGATE_ROW,
            "category": "",
            "perspective": "",
            **{str(m): _fmt(means.get(m)) for m in Metric},
            "normalized_mean": _fmt(overall),
            "physics_iq": _fmt(report.physics_iq),
        }
    )
    return rows


def write_report(
    report: EvalReport, path: str | Path, fmt: str | None = None
) -> None:
    """Write a report as JSON or CSV, chosen by `fmt` or the file suffix.

    CSV has one row per recording plus a final `all` row with the
    model's means and Physics-IQ score; numbers carry six decimals.
    """
    path = Path(path)
    kind = ReportFormat.for_path(path, fmt)
    if kind is ReportFormat.CSV:
        text = _csv_text(CSV_COLUMNS, _report_rows(report))
    else:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    path.write_text(text, encoding="utf-8")
    logger.debug(f"Wrote {kind} report for {report.model} to {path}")


def load_report(path: str | Path) -> EvalReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return EvalReport.from_dict(data)
    except (json.JSONDecodeError, KeyError) as e:
        raise ReportError(f"Invalid report {path}: {e}") from e


def read_report_csv(path: str | Path) -> list[dict[str, Any]]:
    """Rows of a CSV report with numeric columns parsed (None if blank)."""
    numeric = set(CSV_COLUMNS[4:])
    with Path(path).open(newline="", encoding="utf-8") as f:
        return [
            {
                k: (float(v) if v else None) if k in numeric else v
                for k, v in row.items()
            }
            for row in csv.DictReader(f)
        ]


def summary_rows(
    reports: Sequence[EvalReport],
) -> tuple[list[dict[str, Any]], float | None]:
    """Summary rows (physical variance first) and Spearman(Physics-IQ, rank).

    Models follow in descending Physics-IQ order. Mean ranks need two
    models and the correlation three.
    """
    if not reports:
        raise ReportError("No reports to summarize")
    ranks = mean_rank(reports) if len(reports) >= 2 else {}
    baseline = mean_values(r.baseline for r in reports)
    rows: list[dict[str, Any]] = [
        {
            "model": VARIANCE_LABEL,
            **{str(m): baseline[m] for m in Metric},
            "physics_iq": 100.0,
            "mean_rank": None,
        }
    ]
    ordered = sorted(reports, key=lambda r: (-r.physics_iq, r.model))
    for report in ordered:
        means = report.metric_means()
        rows.append(
            {
                "model": report.model,
                **{str(m): means.get(m) for m in Metric},
                "physics_iq": report.physics_iq,
                "mean_rank": ranks.get(report.model),
            }
        )
    correlation = None
    if len(reports) >= 3:
        correlation = spearman(
            [r.physics_iq for r in ordered],
            [ranks[r.model] for r in ordered],
        )
    return rows, correlation


def reference_summary() -> tuple[list[dict[str, Any]], float]:
    """The published dataset-level results in summary form."""
    ranks = mean_rank_table({r.model: r.metrics() for r in REFERENCE_RESULTS})
    rows: list[dict[str, Any]] = []
    for r in (PHYSICAL_VARIANCE, *REFERENCE_RESULTS):
        rows.append(
            {
                "model": r.model,
                **{str(m): v for m, v in r.metrics().items()},
                "physics_iq": r.physics_iq,
                "mean_rank": ranks.get(r.model),
            }
        )
    correlation = spearman(
        [r.physics_iq for r in REFERENCE_RESULTS],
        [ranks[r.model] for r in REFERENCE_RESULTS],
    )
    return rows, correlation


def write_summary(
    rows: list[dict[str, Any]],
    correlation: float | None,
    path: str | Path,
    fmt: str | None = None,
) -> None:
    path = Path(path)
    if ReportFormat.for_path(path, fmt) is ReportFormat.CSV:
        text = _csv_text(
            SUMMARY_COLUMNS,
            [
                {
                    k: v if isinstance(v, str) else _fmt(v)
                    for k, v in row.items()
                }
                for row in rows
            ],
        )
    else:
        text = (
            json.dumps(
                {
                    "models": rows,
                    "spearman_physics_iq_mean_rank": correlation,
                },
                indent=2,
            )
            + "\n"
        )
    path.write_text(text, encoding="utf-8")
