from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

from physiq.config import EvalConfig
from physiq.frameseq import load_sequence
from physiq.metrics import Metric, evaluate_pair

from .constants import EPSILON, Category, Perspective
from .dataset import ScenarioKey, ScenarioRecord, ground_truth_records
from .variance import (
    MetricValues,
    VarianceBaseline,
    compute_variance_baseline,
    mean_values,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

logger = logging.getLogger(__name__)


class ReportError(ValueError):
    pass


def normalize(metric: Metric, value: float, baseline: float) -> float:
    """Score one metric value against physical variance, in [0, 1].

    Values meeting or beating the baseline score 1; below it, IoU metrics
    score their ratio to the baseline and mse the inverse ratio, with both
    sides floored at `EPSILON`.
    """
    if metric.higher_is_better:
        if value >= baseline:
            return 1.0
        return max(min(value / max(baseline, EPSILON), 1.0), 0.0)
    if value <= baseline:
        return 1.0
    return min(max(baseline, EPSILON) / max(value, EPSILON), 1.0)


@dataclass(frozen=True)
class ScenarioMetrics:
    scenario_id: str
    category: Category
    perspective: Perspective
    # None when the model produced no video for this recording
    values: MetricValues | None
    baseline: MetricValues = field(default_factory=dict)
    normalized: MetricValues = field(default_factory=dict)

    @property
    def key(self) -> ScenarioKey:
        return ScenarioKey(self.scenario_id, self.perspective)

    @property
    def missing(self) -> bool:
        return self.values is None

    @property
    def normalized_mean(self) -> float:
        if not self.normalized:
            return 0.0
        return math.fsum(self.normalized.values()) / len(self.normalized)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario_id": self.scenario_id,
            "category": str(self.category),
            "perspective": str(self.perspective),
            "missing": self.missing,
            "values": _metric_dict(self.values),
            "baseline": _metric_dict(self.baseline),
            "normalized": _metric_dict(self.normalized),
            "normalized_mean": self.normalized_mean,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ScenarioMetrics:
        try:
            category = Category(data["category"])
        except ValueError as e:
            raise ReportError(
                f"Unknown category {data['category']!r}"
                f" for {data['scenario_id']}"
            ) from e
        return cls(
            scenario_id=data["scenario_id"],
            category=category,
            perspective=Perspective(data["perspective"]),
            values=_metric_values(data["values"]),
            baseline=_metric_values(data["baseline"]) or {},
            normalized=_metric_values(data["normalized"]) or {},
        )


def _metric_dict(values: MetricValues | None) -> dict[str, float] | None:
    if values is None:
        return None
    return {str(m): values[m] for m in Metric if m in values}


def _metric_values(data: dict[str, float] | None) -> MetricValues | None:
    if data is None:
        return None
    return {Metric(k): float(v) for k, v in data.items()}


def score_scenario(
    result: ScenarioMetrics, baseline: VarianceBaseline
) -> ScenarioMetrics:
    base = baseline.lookup(result.key)
    if result.values is None:
        normalized = dict.fromkeys(Metric, 0.0)
    else:
        normalized = {
            m: normalize(m, result.values[m], base[m]) for m in Metric
        }
    return replace(result, baseline=dict(base), normalized=normalized)


def physics_iq_score(
    results: Iterable[ScenarioMetrics], baseline: VarianceBaseline
) -> float:
    """Physics-IQ score in [0, 100]; physical variance scores 100.

    Each recording scores the mean of its normalized metrics (0 when the
    model produced nothing); the score is 100 times the mean over
    recordings.
    """
    scored = [score_scenario(r, baseline) for r in results]
    if not scored:
        raise ReportError("Cannot score an empty report")
    return 100.0 * math.fsum(s.normalized_mean for s in scored) / len(scored)


@dataclass(frozen=True)
class EvalReport:
    model: str
    scenarios: tuple[ScenarioMetrics, ...]
    physics_iq: float
    # Dataset-level physical variance the scores are normalized against
    baseline: MetricValues
    mask_params: dict[str, Any] = field(default_factory=dict)
    spatiotemporal_mode: str = "volume"

    @property
    def keys(self) -> set[ScenarioKey]:
        return {s.key for s in self.scenarios}

    @property
    def missing(self) -> list[ScenarioKey]:
        return [s.key for s in self.scenarios if s.missing]

    def metric_means(self) -> MetricValues:
        """Mean raw metric values over recordings the model produced."""
        return mean_values(
            s.values for s in self.scenarios if s.values is not None
        )

    def normalized_means(self) -> MetricValues:
        return mean_values(s.normalized for s in self.scenarios)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "physics_iq": self.physics_iq,
            "metric_means": _metric_dict(self.metric_means()),
            "baseline": _metric_dict(self.baseline),
            "mask_params": self.mask_params,
            "spatiotemporal_mode": self.spatiotemporal_mode,
            "missing": [
                [k.scenario_id, str(k.perspective)] for k in self.missing
            ],
            "scenarios": [s.to_dict() for s in self.scenarios],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EvalReport:
        return cls(
            model=data["model"],
            scenarios=tuple(
                ScenarioMetrics.from_dict(s) for s in data["scenarios"]
            ),
            physics_iq=float(data["physics_iq"]),
            baseline=_metric_values(data["baseline"]) or {},
            mask_params=data.get("mask_params", {}),
            spatiotemporal_mode=data.get("spatiotemporal_mode", "volume"),
        )


def build_report(
    model: str,
    results: Iterable[ScenarioMetrics],
    baseline: VarianceBaseline,
    config: EvalConfig | None = None,
) -> EvalReport:
    config = config or EvalConfig()
    if baseline.spatiotemporal_mode != str(config.spatiotemporal_mode):
        raise ReportError(
            f"Baseline uses spatiotemporal mode"
            f" {baseline.spatiotemporal_mode!r}, evaluation uses"
            f" {str(config.spatiotemporal_mode)!r}"
        )
    scored = tuple(
        sorted(
            (score_scenario(r, baseline) for r in results),
            key=lambda s: (
                s.scenario_id,
                list(Perspective).index(s.perspective),
            ),
        )
    )
    if not scored:
        raise ReportError(f"No recordings to report for {model}")
    score = 100.0 * math.fsum(s.normalized_mean for s in scored) / len(scored)
    return EvalReport(
        model=model,
        scenarios=scored,
        physics_iq=score,
        baseline=dict(baseline.aggregate),
        mask_params=config.mask.to_dict(),
        spatiotemporal_mode=str(config.spatiotemporal_mode),
    )


def generated_path(root: Path, key: ScenarioKey) -> Path:
    """Location of a model's continuation for one recording."""
    return root / key.scenario_id / str(key.perspective)


def _evaluate_recording(
    record: ScenarioRecord, generated: Path, config: EvalConfig
) -> MetricValues | None:
    if not generated.exists():
        logger.warning(
            f"No generated video for {record.scenario_id}"
            f" {record.perspective}: scoring 0"
        )
        return None
    result = evaluate_pair(
        record.test_segment(),
        load_sequence(generated),
        config.mask,
        config.spatiotemporal_mode,
        config.compare_seconds,
    )
    return {m: v.value for m, v in result.items()}


def evaluate_model(
    records: Iterable[ScenarioRecord],
    generated_root: str | Path,
    config: EvalConfig | None = None,
    model: str = "model",
    baseline: VarianceBaseline | None = None,
) -> EvalReport:
    """Score a model's continuations against take 1 of every recording.

    Continuations live at `<generated_root>/<scenario_id>/<perspective>`
    and cover only the test segment. Without a precomputed `baseline` the
    physical variance is computed from the same records.
    """
    records = list(records)
    config = config or EvalConfig()
    generated_root = Path(generated_root)
    if baseline is None:
        baseline = compute_variance_baseline(
            records, config, allow_missing=True
        )
    truths = ground_truth_records(records)
    logger.info(f"Evaluating {model} on {len(truths)} recordings")
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        values = list(
            pool.map(
                lambda r: _evaluate_recording(
                    r, generated_path(generated_root, r.key), config
                ),
                truths,
            )
        )
    results = [
        ScenarioMetrics(r.scenario_id, r.category, r.perspective, v)
        for r, v in zip(truths, values)
    ]
    report = build_report(model, results, baseline, config)
    logger.info(f"{model}: Physics-IQ {report.physics_iq:.1f}")
    return report


@dataclass(frozen=True)
class CategoryRow:
    count: int
    # Mean raw metric values over recordings the model produced
    values: MetricValues
    baseline: MetricValues
    normalized: MetricValues
    physics_iq: float


def category_breakdown(
    report: EvalReport,
) -> dict[Category, CategoryRow | None]:
    """Per-category metric, baseline and normalized means.

    Every category appears; those without recordings map to None.
    """
    by_category: dict[Category, list[ScenarioMetrics]] = {
        c: [] for c in Category
    }
    for s in report.scenarios:
        if s.category not in by_category:
            raise ReportError(f"Unknown category {s.category!r}")
        by_category[s.category].append(s)
    table: dict[Category, CategoryRow | None] = {}
    for category, rows in by_category.items():
        if not rows:
            table[category] = None
            continue
        table[category] = CategoryRow(
            count=len(rows),
            values=mean_values(r.values for r in rows if r.values is not None),
            baseline=mean_values(r.baseline for r in rows),
            normalized=mean_values(r.normalized for r in rows),
            physics_iq=100.0
            * math.fsum(r.normalized_mean for r in rows)
            / len(rows),
        )
    return table


def check_coverage(reports: Sequence[EvalReport]) -> None:
    keys = reports[0].keys
    for report in reports[1:]:
        if report.keys != keys:
            raise ReportError(
                f"Inconsistent scenario coverage: {reports[0].model} and"
                f" {report.model} were evaluated on different recordings"
            )
