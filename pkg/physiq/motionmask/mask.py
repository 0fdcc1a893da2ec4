from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Any

import cv2
import numpy as np

from physiq.frameseq import FrameSequence, load_sequence, save_sequence

from .params import MaskError, MaskParams

if TYPE_CHECKING:
    from pathlib import Path

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MaskVideo:
    """Binary motion volume of shape (frames, height, width)."""

    data: np.ndarray
    fps: float = 1.0

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 3 or 0 in data.shape:
            raise MaskError(f"Mask volume must be (t, h, w): {data.shape}")
        if data.dtype != np.bool_:
            if not np.isin(data, (0, 1)).all():
                raise MaskError("Mask volume values must be 0 or 1")
            data = data.astype(np.bool_)
        elif data.flags.writeable:
            data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def num_frames(self) -> int:
        return int(self.data.shape[0])

    @property
    def height(self) -> int:
        return int(self.data.shape[1])

    @property
    def width(self) -> int:
        return int(self.data.shape[2])

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.num_frames, self.height, self.width)


class MapKind(Enum):
    BINARY = "binary"
    WEIGHTED = "weighted"


@dataclass(frozen=True, eq=False)
class MotionMap:
    """Spatial (height, width) motion summary of a mask video."""

    data: np.ndarray
    kind: MapKind

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise MaskError(f"Motion map must be (h, w): {data.shape}")
        if self.kind is MapKind.BINARY and not np.isin(data, (0, 1)).all():
            raise MaskError("Binary motion map values must be 0 or 1")
        if ((data < 0) | (data > 1)).any():
            raise MaskError("Motion map values must lie in [0, 1]")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.data.shape[0]), int(self.data.shape[1]))


def to_grayscale(frame: np.ndarray) -> np.ndarray:
    """BT.601 luma of an RGB frame; single-channel frames pass through."""
    if frame.shape[2] == 1:
        return frame[..., 0]
    return cv2.cvtColor(frame, cv2.COLOR_RGB2GRAY)


def preprocess_frame(frame: np.ndarray, params: MaskParams) -> np.ndarray:
    side = 2 * params.blur_radius + 1
    return cv2.GaussianBlur(
        to_grayscale(frame).astype(np.float64),
        (side, side),
        params.blur_sigma,
        borderType=cv2.BORDER_REPLICATE,
    )


def compute_mask_video(
    seq: FrameSequence, params: MaskParams | None = None
) -> MaskVideo:
    """Binary motion masks by blurred adaptive background subtraction.

    The background starts as the mean of the first `window` preprocessed
    frames and follows every frame as a running average; each frame
    (including the warm-up frames) gets one mask, cleaned by a
    morphological opening then closing.
    """
    params = params or MaskParams()
    if seq.num_frames < params.window:
        raise MaskError(
            f"Need at least {params.window} frames for the background"
            f" window, got {seq.num_frames}"
        )
    frames = [preprocess_frame(f, params) for f in seq]
    background = np.mean(frames[: params.window], axis=0)
    kernel = cv2.getStructuringElement(
        cv2.MORPH_RECT, (params.morph_kernel, params.morph_kernel)
    )
    rate = params.update_rate
    masks = np.empty((seq.num_frames, seq.height, seq.width), dtype=np.bool_)
    for t, frame in enumerate(frames):
        background = (1.0 - rate) * background + rate * frame
        moving = (np.abs(frame - background) > params.threshold).astype(
            np.uint8
        )
        moving = cv2.morphologyEx(
            moving, cv2.MORPH_OPEN, kernel, borderType=cv2.BORDER_REPLICATE
        )
        moving = cv2.morphologyEx(
            moving, cv2.MORPH_CLOSE, kernel, borderType=cv2.BORDER_REPLICATE
        )
        masks[t] = moving.astype(np.bool_)
    logger.debug(
        f"Computed {seq.num_frames} masks, {int(masks.sum())} moving voxels"
    )
    return MaskVideo(masks, seq.fps)


def collapse_spatial(mask: MaskVideo) -> MotionMap:
    """Where motion happened at all: max over time."""
    return MotionMap(mask.data.any(axis=0).astype(np.float64), MapKind.BINARY)


def collapse_weighted(mask: MaskVideo) -> MotionMap:
    """How often motion happened: fraction of frames with motion."""
    counts = mask.data.sum(axis=0, dtype=np.int64)
    return MotionMap(counts / mask.num_frames, MapKind.WEIGHTED)


def save_mask_video(
    mask: MaskVideo, path: str | Path, extra_meta: dict[str, Any] | None = None
) -> None:
    frames = mask.data.astype(np.uint8)[..., np.newaxis] * 255
    save_sequence(FrameSequence(frames, mask.fps), path, extra_meta)


def load_mask_video(path: str | Path) -> MaskVideo:
    seq = load_sequence(path)
    if seq.channels != 1:
        raise MaskError(f"Mask video at {path} is not single-channel")
    return MaskVideo(seq.data[..., 0] > 0, seq.fps)
