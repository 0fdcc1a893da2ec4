from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

from physiq.config import EvalConfig
from physiq.metrics import Metric, evaluate_pair

from .constants import GROUND_TRUTH_TAKE, VARIANCE_TAKE, Perspective
from .dataset import DatasetError, ScenarioKey, ScenarioRecord, group_takes

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

logger = logging.getLogger(__name__)

MetricValues = dict[Metric, float]


def mean_values(rows: Iterable[Mapping[Metric, float]]) -> MetricValues:
    rows = list(rows)
    if not rows:
        return {}
    return {m: math.fsum(r[m] for r in rows) / len(rows) for m in Metric}


@dataclass(frozen=True)
class VarianceBaseline:
    """Metric values between take 1 and take 2 of each recording."""

    per_scenario: dict[ScenarioKey, MetricValues]
    aggregate: MetricValues
    # (scenario, perspective) pairs without both takes
    missing: tuple[ScenarioKey, ...] = ()
    mask_params: dict[str, Any] = field(default_factory=dict)
    spatiotemporal_mode: str = "volume"

    def lookup(self, key: ScenarioKey) -> MetricValues:
        """Per-recording baseline, or the aggregate for flagged gaps."""
        if key in self.per_scenario:
            return self.per_scenario[key]
        if key in self.missing:
            return self.aggregate
        raise DatasetError(
            f"No variance baseline for {key.scenario_id} {key.perspective}"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "aggregate": {str(m): v for m, v in self.aggregate.items()},
            "mask_params": self.mask_params,
            "missing": [
                [k.scenario_id, str(k.perspective)] for k in self.missing
            ],
            "scenarios": [
                {
                    "scenario_id": key.scenario_id,
                    "perspective": str(key.perspective),
                    **{str(m): v for m, v in values.items()},
                }
                for key, values in self.per_scenario.items()
            ],
            "spatiotemporal_mode": self.spatiotemporal_mode,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> VarianceBaseline:
        per_scenario = {
            ScenarioKey(row["scenario_id"], Perspective(row["perspective"])): {
                m: float(row[str(m)]) for m in Metric
            }
            for row in data["scenarios"]
        }
        return cls(
            per_scenario=per_scenario,
            aggregate={
                Metric(k): float(v) for k, v in data["aggregate"].items()
            },
            missing=tuple(
                ScenarioKey(s, Perspective(p)) for s, p in data["missing"]
            ),
            mask_params=data.get("mask_params", {}),
            spatiotemporal_mode=data.get("spatiotemporal_mode", "volume"),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> VarianceBaseline:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            return cls.from_dict(data)
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise DatasetError(f"Invalid variance baseline {path}: {e}") from e


def _take_pair_metrics(
    takes: dict[int, ScenarioRecord], config: EvalConfig
) -> MetricValues:
    real = takes[GROUND_TRUTH_TAKE].test_segment()
    partner = takes[VARIANCE_TAKE].test_segment()
    result = evaluate_pair(
        real,
        partner,
        config.mask,
        config.spatiotemporal_mode,
        config.compare_seconds,
    )
    return {m: v.value for m, v in result.items()}


def compute_variance_baseline(
    records: Iterable[ScenarioRecord],
    config: EvalConfig | None = None,
    *,
    allow_missing: bool = False,
) -> VarianceBaseline:
    """Physical variance: all metrics between the two takes' test segments.

    Recordings lacking a take raise, unless `allow_missing` is set, in which
    case they are flagged and later scored against the aggregate.
    """
    config = config or EvalConfig()
    complete: dict[ScenarioKey, dict[int, ScenarioRecord]] = {}
    missing: list[ScenarioKey] = []
    for key, takes in group_takes(records).items():
        if set(takes) != {GROUND_TRUTH_TAKE, VARIANCE_TAKE}:
            if not allow_missing:
                raise DatasetError(
                    f"Missing take for {key.scenario_id} {key.perspective}"
                )
            logger.warning(
                f"Flagging {key.scenario_id} {key.perspective}:"
                f" only take {', '.join(map(str, sorted(takes)))} present"
            )
            missing.append(key)
            continue
        first, second = takes[GROUND_TRUTH_TAKE], takes[VARIANCE_TAKE]
        if first.switch_index != second.switch_index:
            raise DatasetError(
                f"Mismatched switch_index between takes for"
                f" {key.scenario_id} {key.perspective}:"
                f" {first.switch_index} vs {second.switch_index}"
            )
        complete[key] = takes
    if not complete:
        raise DatasetError("No recording has both takes")
    logger.info(
        f"Computing physical variance over {len(complete)} recordings"
    )
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        values = list(
            pool.map(
                lambda takes: _take_pair_metrics(takes, config),
                complete.values(),
            )
        )
    per_scenario = dict(zip(complete, values))
    return VarianceBaseline(
        per_scenario=per_scenario,
        aggregate=mean_values(per_scenario.values()),
        missing=tuple(missing),
        mask_params=config.mask.to_dict(),
        spatiotemporal_mode=str(config.spatiotemporal_mode),
    )
