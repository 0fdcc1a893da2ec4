from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from physiq.bench.constants import GROUND_TRUTH_TAKE, TAKES, Perspective
from physiq.bench.dataset import (
    ScenarioRecord,
    group_takes,
    take_record,
    write_manifest,
)
from physiq.bench.scoring import generated_path
from physiq.frameseq import FrameSequence, SplitSpec, save_sequence

from .scenes import SceneKind, default_spec, render_scenario

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)

MINI_BENCHMARK_KINDS = tuple(SceneKind)


def scenario_id(kind: SceneKind) -> str:
    return f"synth-{kind}"


def take_dir(root: Path, record_id: str, perspective: str, take: int) -> Path:
    return root / record_id / perspective / f"take{take}"


def write_mini_benchmark(
    out: str | Path,
    seed: int = 0,
    *,
    noise_amplitude: float = 1.0,
    kinds: Iterable[SceneKind] = MINI_BENCHMARK_KINDS,
    perspective: Perspective = Perspective.CENTER,
) -> list[ScenarioRecord]:
    """Render every kind as a two-take scenario and write `dataset.json`.

    Each scenario gets its own noise seed (`seed` plus its position), so
    the whole benchmark is reproducible from `seed`.
    """
    out = Path(out)
    records: list[ScenarioRecord] = []
    for i, kind in enumerate(kinds):
        spec = default_spec(
            kind, noise_seed=seed + i, noise_amplitude=noise_amplitude
        )
        switch_index = SplitSpec.for_fps(spec.fps).switch_index
        sid = scenario_id(SceneKind(kind))
        for take in TAKES:
            path = take_dir(out, sid, str(perspective), take)
            save_sequence(
                render_scenario(spec, take),
                path,
                {"scenario_id": sid, "switch_index": switch_index},
            )
            records.append(
                ScenarioRecord(
                    scenario_id=sid,
                    category=spec.kind.category,
                    perspective=perspective,
                    take=take,
                    switch_index=switch_index,
                    path=path,
                )
            )
    manifest = write_manifest(records, out)
    logger.info(f"Wrote {len(records)} synthetic recordings to {manifest}")
    return records


def add_pixel_noise(
    seq: FrameSequence, level: float, seed: int = 0
) -> FrameSequence:
    """Add seeded Gaussian noise with standard deviation `level`.

    The noise field depends only on `seed` and the sequence shape, so
    increasing `level` scales the same field.
    """
    if level < 0:
        raise ValueError(f"Noise level must be >= 0: {level}")
    noise = np.random.default_rng(seed).standard_normal(seq.data.shape)
    noisy = np.rint(seq.data + level * noise)
    return FrameSequence(np.clip(noisy, 0, 255).astype(np.uint8), seq.fps)


def write_replay_model(
    records: Iterable[ScenarioRecord],
    out: str | Path,
    *,
    take: int = GROUND_TRUTH_TAKE,
    noise_level: float = 0.0,
    seed: int = 0,
) -> Path:
    """Write a stand-in model whose continuations replay one take.

    Continuations land in the generated-video layout, optionally degraded
    with `add_pixel_noise` (one seed per recording).
    """
    out = Path(out)
    for i, (key, takes) in enumerate(group_takes(records).items()):
        continuation = take_record(key, takes, take).test_segment()
        if noise_level > 0:
            continuation = add_pixel_noise(continuation, noise_level, seed + i)
        save_sequence(continuation, generated_path(out, key))
    return out
