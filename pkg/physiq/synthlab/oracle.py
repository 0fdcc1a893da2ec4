"""Analytic motion ground truth and brute-force metric enumeration."""

from __future__ import annotations

import itertools
import math
from typing import TYPE_CHECKING

import numpy as np

from physiq.frameseq import FrameSequence, SplitSpec
from physiq.metrics import Metric, MetricValue, SpatiotemporalMode
from physiq.motionmask import MapKind, MaskVideo, MotionMap

from .scenes import SceneError, SceneKind, SynthSpec, check_bounds, footprint

if TYPE_CHECKING:
    from collections.abc import Callable

# Largest volume enumerated: frames, height, width
MAX_ORACLE_SHAPE = (16, 32, 32)

OracleInput = MaskVideo | MotionMap | FrameSequence


def oracle_frames(spec: SynthSpec) -> range:
    """Test-segment frames when the clip allows the split, else all."""
    split = SplitSpec.for_fps(spec.fps)
    start = split.switch_index + 1
    stop = start + split.test_frames(spec.fps)
    if stop <= spec.num_frames:
        return range(start, stop)
    return range(spec.num_frames)


def oracle_mask_video(
    spec: SynthSpec, frames: range | None = None
) -> MaskVideo:
    """Exact per-frame object footprints of a noise-free moving scene."""
    if spec.noisy:
        raise SceneError("Analytic masks need a noise-free spec")
    check_bounds(spec)
    frames = frames if frames is not None else oracle_frames(spec)
    data = np.zeros((len(frames), spec.height, spec.width), dtype=np.bool_)
    if spec.kind is not SceneKind.STATIC:
        for i, t in enumerate(frames):
            data[i] = footprint(spec, t)
    return MaskVideo(data, spec.fps)


def oracle_motion_map(spec: SynthSpec) -> MotionMap:
    """Union of object footprints over the test segment."""
    mask = oracle_mask_video(spec)
    union = np.logical_or.reduce(mask.data, axis=0)
    return MotionMap(union.astype(np.float64), MapKind.BINARY)


def _shape(x: OracleInput) -> tuple[int, ...]:
    if isinstance(x, FrameSequence):
        return x.data.shape
    return x.shape


def _check_size(shape: tuple[int, ...]) -> None:
    # Maps are (h, w), masks (t, h, w), frames (t, h, w, c)
    dims = shape[:3] if len(shape) > 2 else (1, *shape)
    if any(d > cap for d, cap in zip(dims, MAX_ORACLE_SHAPE)):
        raise SceneError(
            f"Oracle input {shape} exceeds {MAX_ORACLE_SHAPE}"
            " (frames, height, width)"
        )


def _iou(cells: list[tuple[int, ...]], a: np.ndarray, b: np.ndarray) -> float:
    intersection = 0
    union = 0
    for c in cells:
        intersection += int(bool(a[c]) and bool(b[c]))
        union += int(bool(a[c]) or bool(b[c]))
    if union == 0:
        return 1.0
    return intersection / union


def _weighted_iou(
    cells: list[tuple[int, ...]], a: np.ndarray, b: np.ndarray
) -> float:
    lows = [min(float(a[c]), float(b[c])) for c in cells]
    highs = [max(float(a[c]), float(b[c])) for c in cells]
    upper = math.fsum(highs)
    if upper == 0:
        return 1.0
    return math.fsum(lows) / upper


def _mse(
    cells: list[tuple[int, ...]],
    a: np.ndarray,
    b: np.ndarray,
    scale: float,
) -> float:
    squares = []
    for c in cells:
        d = float(a[c]) / scale - float(b[c]) / scale
        squares.append(d * d)
    return math.fsum(squares) / len(cells)


def _collapse(
    mask: np.ndarray, reduce: Callable[[list[bool]], float]
) -> np.ndarray:
    frames, height, width = mask.shape
    out = np.zeros((height, width), dtype=np.float64)
    for y in range(height):
        for x in range(width):
            out[y, x] = reduce([bool(mask[t, y, x]) for t in range(frames)])
    return out


def _cells(shape: tuple[int, ...]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(d) for d in shape)))


def oracle_metrics(a: OracleInput, b: OracleInput) -> list[MetricValue]:
    """Every applicable metric by naive enumeration of pixels or voxels.

    Mask videos yield all four metrics (spatiotemporal IoU in both modes,
    mse over the binary volume); motion maps yield the map metrics; frame
    sequences yield mse over [0, 1]-scaled intensities.
    """
    if type(a) is not type(b):
        raise SceneError(
            f"Oracle inputs differ in type: {type(a).__name__}"
            f" vs {type(b).__name__}"
        )
    shape = _shape(a)
    if _shape(b) != shape:
        raise SceneError(f"Oracle shape mismatch: {shape} vs {_shape(b)}")
    _check_size(shape)
    if isinstance(a, FrameSequence) and isinstance(b, FrameSequence):
        value = _mse(_cells(shape), a.data, b.data, 255.0)
        return [MetricValue(Metric.MSE, value)]
    if isinstance(a, MotionMap) and isinstance(b, MotionMap):
        cells = _cells(shape)
        values = []
        binary = all(
            float(m.data[c]) in (0.0, 1.0) for m in (a, b) for c in cells
        )
        if binary:
            values.append(
                MetricValue(Metric.SPATIAL_IOU, _iou(cells, a.data, b.data))
            )
        values.append(
            MetricValue(
                Metric.WEIGHTED_SPATIAL_IOU,
                _weighted_iou(cells, a.data, b.data),
            )
        )
        values.append(MetricValue(Metric.MSE, _mse(cells, a.data, b.data, 1)))
        return values
    if not isinstance(a, MaskVideo) or not isinstance(b, MaskVideo):
        raise SceneError(f"Unsupported oracle input {type(a).__name__}")
    frames = shape[0]
    voxels = _cells(shape)
    pixels = _cells(shape[1:])
    per_frame = [_iou(pixels, a.data[t], b.data[t]) for t in range(frames)]
    spatial_a = _collapse(a.data, lambda col: float(any(col)))
    spatial_b = _collapse(b.data, lambda col: float(any(col)))
    weighted_a = _collapse(a.data, lambda col: sum(col) / frames)
    weighted_b = _collapse(b.data, lambda col: sum(col) / frames)
    return [
        MetricValue(Metric.SPATIAL_IOU, _iou(pixels, spatial_a, spatial_b)),
        MetricValue(
            Metric.SPATIOTEMPORAL_IOU,
            _iou(voxels, a.data, b.data),
            str(SpatiotemporalMode.VOLUME),
        ),
        MetricValue(
            Metric.SPATIOTEMPORAL_IOU,
            math.fsum(per_frame) / frames,
            str(SpatiotemporalMode.FRAME_MEAN),
        ),
        MetricValue(
            Metric.WEIGHTED_SPATIAL_IOU,
            _weighted_iou(pixels, weighted_a, weighted_b),
        ),
        MetricValue(Metric.MSE, _mse(voxels, a.data, b.data, 1.0)),
    ]
