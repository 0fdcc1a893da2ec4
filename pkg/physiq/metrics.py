"""Physical-understanding metrics between real and generated video."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum, StrEnum
from typing import TYPE_CHECKING, Any

import numpy as np

from physiq.frameseq import FrameSequence, resample_fps
from physiq.frameseq.constants import TEST_SECONDS
from physiq.motionmask import (
    MaskParams,
    MaskVideo,
    MotionMap,
    collapse_spatial,
    collapse_weighted,
    compute_mask_video,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)


class MetricError(ValueError):
    pass


class Direction(Enum):
    HIGHER_BETTER = "higher-better"
    LOWER_BETTER = "lower-better"


class Metric(StrEnum):
    SPATIAL_IOU = "spatial_iou"
    SPATIOTEMPORAL_IOU = "spatiotemporal_iou"
    WEIGHTED_SPATIAL_IOU = "weighted_spatial_iou"
    MSE = "mse"

    @property
    def direction(self) -> Direction:
        if self is Metric.MSE:
            return Direction.LOWER_BETTER
        return Direction.HIGHER_BETTER

    @property
    def higher_is_better(self) -> bool:
        return self.direction is Direction.HIGHER_BETTER


METRICS = tuple(Metric)
IOU_METRICS = (
    Metric.SPATIAL_IOU,
    Metric.SPATIOTEMPORAL_IOU,
    Metric.WEIGHTED_SPATIAL_IOU,
)


class SpatiotemporalMode(StrEnum):
    # |a ∩ b| / |a ∪ b| over the whole (t, h, w) volume
    VOLUME = "volume"
    # Mean of per-frame IoUs, empty frames counting as agreement
    FRAME_MEAN = "frame-mean"


@dataclass(frozen=True)
class MetricValue:
    name: Metric
    value: float
    mode: str | None = None

    @property
    def direction(self) -> Direction:
        return self.name.direction

    def to_record(self) -> dict[str, Any]:
        return {
            "metric": str(self.name),
            "mode": self.mode,
            "value": self.value,
        }


MetricSet = dict[Metric, MetricValue]


def exact_sum(values: Iterable[float] | np.ndarray) -> float:
    """Exactly rounded sum, independent of summation order."""
    if isinstance(values, np.ndarray):
        values = values.ravel().tolist()
    return math.fsum(values)


def iou_from_counts(intersection: int, union: int) -> float:
    # Both sides agreeing that nothing moved is perfect agreement
    if union == 0:
        return 1.0
    return intersection / union


def _binary_iou(a: np.ndarray, b: np.ndarray) -> float:
    return iou_from_counts(
        int(np.count_nonzero(a & b)), int(np.count_nonzero(a | b))
    )


def _check_shapes(a: tuple[int, ...], b: tuple[int, ...]) -> None:
    if a != b:
        raise MetricError(f"Dimension mismatch: {a} vs {b}")


def spatial_iou(a: MotionMap, b: MotionMap) -> MetricValue:
    """IoU of two binary motion maps: *where* motion happens."""
    _check_shapes(a.shape, b.shape)
    for m in (a, b):
        if not np.isin(m.data, (0.0, 1.0)).all():
            raise MetricError("spatial_iou needs binary motion maps")
    value = _binary_iou(a.data > 0, b.data > 0)
    return MetricValue(Metric.SPATIAL_IOU, value)


def spatiotemporal_iou(
    a: MaskVideo,
    b: MaskVideo,
    mode: SpatiotemporalMode = SpatiotemporalMode.VOLUME,
) -> MetricValue:
    """IoU of two mask videos: *where and when* motion happens."""
    _check_shapes(a.shape, b.shape)
    mode = SpatiotemporalMode(mode)
    if mode is SpatiotemporalMode.VOLUME:
        value = _binary_iou(a.data, b.data)
    else:
        per_frame = [_binary_iou(fa, fb) for fa, fb in zip(a.data, b.data)]
        value = exact_sum(per_frame) / len(per_frame)
    return MetricValue(Metric.SPATIOTEMPORAL_IOU, value, str(mode))


def weighted_spatial_iou(a: MotionMap, b: MotionMap) -> MetricValue:
    """Sum of pixel-wise minima over sum of maxima: *how much* motion."""
    _check_shapes(a.shape, b.shape)
    for m in (a, b):
        if ((m.data < 0) | (m.data > 1)).any():
            raise MetricError("Weighted motion map values must be in [0, 1]")
    upper = exact_sum(np.maximum(a.data, b.data))
    if upper == 0:
        return MetricValue(Metric.WEIGHTED_SPATIAL_IOU, 1.0)
    lower = exact_sum(np.minimum(a.data, b.data))
    return MetricValue(Metric.WEIGHTED_SPATIAL_IOU, lower / upper)


def mean_squared_error(
    a: np.ndarray, b: np.ndarray, scale: float = 255.0
) -> float:
    """Mean of squared differences after dividing both inputs by `scale`."""
    _check_shapes(a.shape, b.shape)
    diff = a.astype(np.float64) / scale - b.astype(np.float64) / scale
    return exact_sum(diff * diff) / diff.size


def mse(a: FrameSequence, b: FrameSequence) -> MetricValue:
    """Pixel fidelity: mean squared error over [0, 1]-scaled intensities."""
    if len(a) != len(b):
        raise MetricError(f"Frame count mismatch: {len(a)} vs {len(b)}")
    _check_shapes(a.data.shape, b.data.shape)
    return MetricValue(Metric.MSE, mean_squared_error(a.data, b.data))


def align_pair(
    real: FrameSequence,
    generated: FrameSequence,
    seconds: float = TEST_SECONDS,
) -> tuple[FrameSequence, FrameSequence]:
    """Bring a real test segment onto the generated video's grid.

    The real segment is resampled to the generated frame rate and
    resolution, then both are cut to the shortest of `seconds` and the two
    lengths.
    """
    if real.channels != generated.channels:
        raise MetricError(
            f"Channel mismatch: {real.channels} vs {generated.channels}"
        )
    same_grid = (
        real.fps == generated.fps
        and real.width == generated.width
        and real.height == generated.height
    )
    if not same_grid:
        dims = (generated.width, generated.height)
        resize = None if dims == (real.width, real.height) else dims
        real = resample_fps(real, generated.fps, resize)
    count = min(round(seconds * generated.fps), len(real), len(generated))
    return real.slice(0, count), generated.slice(0, count)


def evaluate_pair(
    real: FrameSequence,
    generated: FrameSequence,
    params: MaskParams | None = None,
    mode: SpatiotemporalMode = SpatiotemporalMode.VOLUME,
    seconds: float = TEST_SECONDS,
) -> MetricSet:
    """All four metrics for one real/generated pair.

    Both videos are aligned first and masked with the same parameters.
    """
    params = params or MaskParams()
    real, generated = align_pair(real, generated, seconds)
    real_mask = compute_mask_video(real, params)
    gen_mask = compute_mask_video(generated, params)
    values = [
        spatial_iou(collapse_spatial(real_mask), collapse_spatial(gen_mask)),
        spatiotemporal_iou(real_mask, gen_mask, mode),
        weighted_spatial_iou(
            collapse_weighted(real_mask), collapse_weighted(gen_mask)
        ),
        mse(real, generated),
    ]
    logger.debug(
        "Pair metrics: "
        + ", ".join(f"{v.name}={v.value:.6f}" for v in values)
    )
    return {v.name: v for v in values}
