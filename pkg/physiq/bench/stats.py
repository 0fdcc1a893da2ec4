"""Rankings and correlations across evaluated models."""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy import stats

from physiq.metrics import Metric

from .scoring import EvalReport, ReportError, check_coverage

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence


class Correlation(NamedTuple):
    statistic: float
    pvalue: float


def mean_rank_table(
    values: Mapping[str, Mapping[Metric, float]],
) -> dict[str, float]:
    """Mean over metrics of each model's rank (1 = best).

    Ranks respect each metric's direction; tied models share the average
    of the ranks they span.
    """
    if len(values) < 2:
        raise ReportError("Ranking needs at least two models")
    models = list(values)
    totals = dict.fromkeys(models, 0.0)
    for metric in Metric:
        column = np.array([values[m][metric] for m in models], dtype=float)
        if metric.higher_is_better:
            column = -column
        for model, rank in zip(models, stats.rankdata(column)):
            totals[model] += float(rank)
    return {m: totals[m] / len(Metric) for m in models}


def mean_rank(reports: Sequence[EvalReport]) -> dict[str, float]:
    if len(reports) < 2:
        raise ReportError("Ranking needs at least two models")
    check_coverage(reports)
    return mean_rank_table({r.model: r.metric_means() for r in reports})


def _check_pair(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ReportError(f"Length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise ReportError(f"Correlation needs at least 3 values: {len(x)}")


def _check_variance(values: Sequence[float] | np.ndarray) -> None:
    if np.ptp(np.asarray(values, dtype=float)) == 0:
        raise ReportError("Correlation undefined for zero-variance input")


def pearson_test(x: Sequence[float], y: Sequence[float]) -> Correlation:
    _check_pair(x, y)
    _check_variance(x)
    _check_variance(y)
    result = stats.pearsonr(np.asarray(x, float), np.asarray(y, float))
    return Correlation(float(result.statistic), float(result.pvalue))


def spearman_test(x: Sequence[float], y: Sequence[float]) -> Correlation:
    _check_pair(x, y)
    rx, ry = stats.rankdata(x), stats.rankdata(y)
    _check_variance(rx)
    _check_variance(ry)
    result = stats.pearsonr(rx, ry)
    return Correlation(float(result.statistic), float(result.pvalue))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation."""
    return pearson_test(x, y).statistic


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average-ranked values."""
    return spearman_test(x, y).statistic
