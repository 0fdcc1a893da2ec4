from __future__ import annotations

import json
import tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from physiq.frameseq.constants import TEST_SECONDS
from physiq.metrics import SpatiotemporalMode
from physiq.motionmask import MaskParams

CONFIG_TABLES = ("mask", "evaluation")


@dataclass(frozen=True)
class EvalConfig:
    # Background-subtraction parameters, shared by real and generated videos
    mask: MaskParams = field(default_factory=MaskParams)
    # Spatiotemporal IoU flavour: "volume" or "frame-mean"
    spatiotemporal_mode: SpatiotemporalMode = SpatiotemporalMode.VOLUME
    # Concurrent (scenario, perspective) evaluations
    workers: int = 4
    # Length of the compared continuation, in seconds
    compare_seconds: float = TEST_SECONDS

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "spatiotemporal_mode",
            SpatiotemporalMode(self.spatiotemporal_mode),
        )
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1: {self.workers}")
        if not self.compare_seconds > 0:
            raise ValueError(
                f"compare_seconds must be positive: {self.compare_seconds}"
            )

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> EvalConfig:
        unknown = sorted(set(data) - set(CONFIG_TABLES))
        if unknown:
            raise ValueError(f"Unknown config tables: {', '.join(unknown)}")
        evaluation = dict(data.get("evaluation", {}))
        allowed = {"spatiotemporal_mode", "workers", "compare_seconds"}
        unknown = sorted(set(evaluation) - allowed)
        if unknown:
            raise ValueError(
                f"Unknown evaluation keys: {', '.join(unknown)}"
            )
        return cls(
            mask=MaskParams.from_mapping(data.get("mask", {})),
            **evaluation,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> EvalConfig:
        """Load a TOML (`.toml`) or JSON config file."""
        path = Path(path)
        if path.suffix == ".toml":
            with path.open("rb") as f:
                data = tomllib.load(f)
        else:
            data = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"Config file {path} must hold a table")
        return cls.from_mapping(data)

    def to_dict(self) -> dict[str, Any]:
        return {
            "mask": self.mask.to_dict(),
            "evaluation": {
                "spatiotemporal_mode": str(self.spatiotemporal_mode),
                "workers": self.workers,
                "compare_seconds": self.compare_seconds,
            },
        }
