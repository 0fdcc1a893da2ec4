from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from physiq.bench.dataset import (
    ScenarioKey,
    ScenarioRecord,
    ground_truth_records,
)
from physiq.bench.scoring import generated_path
from physiq.frameseq import FrameSequence, SplitSpec, load_sequence, read_meta

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping


class JudgeError(RuntimeError):
    pass


class Position(StrEnum):
    FIRST = "first"
    SECOND = "second"

    @property
    def other(self) -> Position:
        return Position.SECOND if self is Position.FIRST else Position.FIRST


@dataclass(frozen=True)
class VideoRef:
    """A video by reference: a stored sequence and an optional frame range."""

    path: Path
    start: int = 0
    stop: int | None = None

    def load(self) -> FrameSequence:
        seq = load_sequence(self.path)
        stop = seq.num_frames if self.stop is None else self.stop
        return seq.slice(self.start, stop)

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path.as_posix(),
            "start_frame": self.start,
            "stop_frame": self.stop,
        }


@dataclass(frozen=True)
class PresentationPair:
    scenario_id: str
    perspective: str
    first: VideoRef
    second: VideoRef
    generated_position: Position
    order_seed: int

    @property
    def videos(self) -> tuple[VideoRef, VideoRef]:
        return (self.first, self.second)

    @property
    def generated(self) -> VideoRef:
        return self.videos[self.generated_position is Position.SECOND]

    @property
    def real(self) -> VideoRef:
        return self.videos[self.generated_position is Position.FIRST]


def build_pairs(
    real: Mapping[ScenarioKey, VideoRef],
    generated: Mapping[ScenarioKey, VideoRef],
    seed: int,
) -> list[PresentationPair]:
    """One real/generated pair per recording, in seeded random order."""
    missing = sorted(set(real) - set(generated))
    extra = sorted(set(generated) - set(real))
    if missing or extra:
        gaps = [f"no generated video for {k[0]} {k[1]}" for k in missing]
        gaps += [f"no real video for {k[0]} {k[1]}" for k in extra]
        raise JudgeError(f"Scenario mismatch: {'; '.join(gaps)}")
    rng = np.random.default_rng(seed)
    pairs = []
    for key in sorted(real):
        position = Position.FIRST if rng.integers(2) == 0 else Position.SECOND
        videos = (generated[key], real[key])
        if position is Position.SECOND:
            videos = videos[::-1]
        pairs.append(
            PresentationPair(
                scenario_id=key[0],
                perspective=str(key[1]),
                first=videos[0],
                second=videos[1],
                generated_position=position,
                order_seed=seed,
            )
        )
    return pairs


def manifest_pairs(
    records: Iterable[ScenarioRecord], generated_root: str | Path, seed: int
) -> list[PresentationPair]:
    """Pair take-1 test segments with a model's continuations.

    Only continuations that exist are offered; recordings without one
    raise through `build_pairs`.
    """
    generated_root = Path(generated_root)
    real: dict[ScenarioKey, VideoRef] = {}
    generated: dict[ScenarioKey, VideoRef] = {}
    for record in ground_truth_records(records):
        key = record.key
        split = SplitSpec(record.switch_index)
        start = split.switch_index + 1
        fps = float(read_meta(record.path)["fps"])
        stop = start + split.test_frames(fps)
        real[key] = VideoRef(record.path, start, stop)
        path = generated_path(generated_root, key)
        if path.exists():
            generated[key] = VideoRef(path)
    return build_pairs(real, generated, seed)
