from __future__ import annotations

import cv2
import numpy as np

from .sequence import FrameSequence, SequenceError


def _to_uint8(frame: np.ndarray) -> np.ndarray:
    # np.rint rounds half to even
    return np.clip(np.rint(frame), 0, 255).astype(np.uint8)


def _resize(frame: np.ndarray, out_dims: tuple[int, int]) -> np.ndarray:
    width, height = out_dims
    out = cv2.resize(frame, (width, height), interpolation=cv2.INTER_LINEAR)
    return out.reshape(height, width, frame.shape[2])


def resample_fps(
    seq: FrameSequence,
    fps_new: float,
    out_dims: tuple[int, int] | None = None,
) -> FrameSequence:
    """Change the frame rate by linear blending of neighbouring frames.

    The output keeps the input duration: `round(duration * fps_new)`
    frames (at least one), the first and last output frames coinciding
    with the first and last input frames. When `out_dims` (width, height)
    is given, every blended frame is bilinearly resized.
    """
    if not fps_new > 0:
        raise SequenceError(f"fps_new must be positive, got {fps_new}")
    if out_dims is not None and min(out_dims) <= 0:
        raise SequenceError(f"Zero-dimension resize: {out_dims}")

    n_original = seq.num_frames
    n_new = max(1, round(seq.duration * fps_new))
    width, height = out_dims or (seq.width, seq.height)
    out = np.empty((n_new, height, width, seq.channels), dtype=np.uint8)
    for j in range(n_new):
        alpha = 0.0 if n_new == 1 else j * (n_original - 1) / (n_new - 1)
        i = int(np.floor(alpha))
        beta = alpha - i
        f1 = seq.data[i].astype(np.float64)
        f2 = seq.data[min(i + 1, n_original - 1)].astype(np.float64)
        blended = (1.0 - beta) * f1 + beta * f2
        if out_dims is not None:
            blended = _resize(blended, out_dims)
        out[j] = _to_uint8(blended)
    return FrameSequence(out, fps_new)
