"""Conditioning inputs handed to a video model before it continues."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING

from physiq.frameseq import (
    FrameSequence,
    SplitSpec,
    resample_fps,
    save_sequence,
    split_at_switch,
)

from .dataset import ground_truth_records
from .scoring import generated_path

if TYPE_CHECKING:
    from collections.abc import Iterable

    from .constants import ModelFormat
    from .dataset import ScenarioRecord

logger = logging.getLogger(__name__)


def conditioning_input(
    seq: FrameSequence, switch_index: int, fmt: ModelFormat
) -> FrameSequence:
    """What a model sees of a recording, on the model's own grid.

    Image-to-video models get the switch frame alone. Multiframe models
    get the whole conditioning segment, resampled to the model's frame
    rate so it still spans the same seconds and ends on the switch frame.
    """
    conditioning, _ = split_at_switch(seq, SplitSpec(switch_index))
    size = None if fmt.size == (seq.width, seq.height) else fmt.size
    if fmt.multiframe:
        return resample_fps(conditioning, fmt.fps, size)
    still = conditioning.slice(switch_index, switch_index + 1)
    if size is not None:
        still = resample_fps(still, still.fps, size)
    return FrameSequence(still.data, fmt.fps)


def write_conditioning(
    records: Iterable[ScenarioRecord], out: str | Path, fmt: ModelFormat
) -> list[Path]:
    """Export take-1 conditioning inputs for one model format.

    Inputs land in the generated-video layout,
    `<out>/<scenario_id>/<perspective>/`.
    """
    out = Path(out)
    paths = []
    for record in ground_truth_records(records):
        seq = conditioning_input(record.load(), record.switch_index, fmt)
        path = generated_path(out, record.key)
        save_sequence(
            seq,
            path,
            {
                "model": fmt.name,
                "perspective": str(record.perspective),
                "scenario_id": record.scenario_id,
                "switch_index": seq.num_frames - 1,
            },
        )
        paths.append(path)
    logger.info(
        f"Wrote {len(paths)} conditioning inputs for {fmt.name}"
        f" ({fmt.conditioning}) to {out}"
    )
    return paths
