from __future__ import annotations

import json
import logging
import struct
from pathlib import Path
from typing import Any

import cv2
import numpy as np

from .constants import (
    FRAME_GLOB,
    FRAME_PATTERN,
    META_FILE,
    RAW_HEADER,
    RAW_MAGIC,
    RAW_META_SUFFIX,
    RAW_SUFFIX,
)
from .sequence import FrameSequence, SequenceError

logger = logging.getLogger(__name__)

_RAW_HEADER_SIZE = struct.calcsize(RAW_HEADER)


def meta_path(path: Path) -> Path:
    """Sidecar metadata location for a sequence directory or raw file."""
    if path.is_dir():
        return path / META_FILE
    return path.with_suffix(RAW_META_SUFFIX)


def read_meta(path: Path) -> dict[str, Any]:
    meta_file = meta_path(path)
    if not meta_file.is_file():
        raise SequenceError(f"Missing metadata: {meta_file} not found")
    try:
        meta = json.loads(meta_file.read_text())
    except json.JSONDecodeError as e:
        raise SequenceError(f"Unreadable metadata {meta_file}: {e}") from e
    for key in ("fps", "width", "height", "num_frames"):
        if key not in meta:
            raise SequenceError(f"Missing metadata key {key!r} in {meta_file}")
    return meta


def write_meta(
    meta_file: Path, seq: FrameSequence, extra: dict[str, Any] | None = None
) -> None:
    meta: dict[str, Any] = {
        "channels": seq.channels,
        "fps": seq.fps,
        "height": seq.height,
        "num_frames": seq.num_frames,
        "width": seq.width,
    }
    meta.update(extra or {})
    meta_file.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _read_png(frame_file: Path) -> np.ndarray:
    image = cv2.imread(str(frame_file), cv2.IMREAD_UNCHANGED)
    if image is None:
        raise SequenceError(f"Unreadable image: {frame_file}")
    if image.dtype != np.uint8:
        raise SequenceError(f"Not an 8-bit image: {frame_file}")
    if image.ndim == 2:
        return image[..., np.newaxis]
    if image.shape[2] == 4:
        image = image[..., :3]
    return cv2.cvtColor(image, cv2.COLOR_BGR2RGB)


def _write_png(frame_file: Path, frame: np.ndarray) -> None:
    image = frame[..., 0] if frame.shape[2] == 1 else frame
    image = np.ascontiguousarray(image)
    if image.ndim == 3:
        image = cv2.cvtColor(image, cv2.COLOR_RGB2BGR)
    if not cv2.imwrite(str(frame_file), image):
        raise OSError(f"Failed to write {frame_file}")


def _load_directory(path: Path, meta: dict[str, Any]) -> FrameSequence:
    frame_files = sorted(path.glob(FRAME_GLOB))
    if len(frame_files) != int(meta["num_frames"]):
        raise SequenceError(
            f"Frame count mismatch in {path}: metadata declares"
            f" {meta['num_frames']}, found {len(frame_files)}"
        )
    expected = [
        FRAME_PATTERN.format(index=i) for i in range(len(frame_files))
    ]
    if [f.name for f in frame_files] != expected:
        raise SequenceError(f"Frame files in {path} are not numbered 0..n-1")
    frames = [_read_png(f) for f in frame_files]
    return FrameSequence.from_frames(frames, float(meta["fps"]))


def _load_raw(path: Path, meta: dict[str, Any]) -> FrameSequence:
    payload = path.read_bytes()
    if len(payload) < _RAW_HEADER_SIZE:
        raise SequenceError(f"Truncated raw header: {path}")
    magic, width, height, count = struct.unpack_from(RAW_HEADER, payload)
    if magic != RAW_MAGIC:
        raise SequenceError(f"Bad raw magic {magic!r} in {path}")
    if count != int(meta["num_frames"]):
        raise SequenceError(
            f"Frame count mismatch in {path}: metadata declares"
            f" {meta['num_frames']}, header has {count}"
        )
    body = np.frombuffer(payload, dtype=np.uint8, offset=_RAW_HEADER_SIZE)
    if body.size != count * 3 * height * width:
        raise SequenceError(
            f"Raw payload size mismatch in {path}: expected"
            f" {count * 3 * height * width} bytes, got {body.size}"
        )
    planar = body.reshape(count, 3, height, width)
    return FrameSequence(
        np.ascontiguousarray(planar.transpose(0, 2, 3, 1)), float(meta["fps"])
    )


def load_sequence(path: str | Path) -> FrameSequence:
    """Load a frame sequence from a PNG directory or a raw `.piqf` file.

    Raises:
        SequenceError: The metadata is missing or disagrees with the frames,
            frames have different sizes, or an image cannot be decoded.
    """
    path = Path(path)
    if not path.exists():
        raise SequenceError(f"No frame sequence at {path}")
    meta = read_meta(path)
    if path.is_dir():
        seq = _load_directory(path, meta)
    else:
        seq = _load_raw(path, meta)
    if (seq.width, seq.height) != (int(meta["width"]), int(meta["height"])):
        raise SequenceError(
            f"Frame size {seq.width}x{seq.height} in {path} disagrees with"
            f" metadata {meta['width']}x{meta['height']}"
        )
    logger.debug(
        f"Loaded {seq.num_frames} frames ({seq.width}x{seq.height}"
        f" @ {seq.fps:g} fps) from {path}"
    )
    return seq


def save_sequence(
    seq: FrameSequence,
    path: str | Path,
    extra_meta: dict[str, Any] | None = None,
) -> None:
    """Write a sequence as numbered PNG frames plus `meta.json`.

    A path ending in `.piqf` is written in the raw planar format instead,
    with a `<name>.meta.json` sidecar beside it.
    """
    path = Path(path)
    if path.suffix == RAW_SUFFIX:
        _save_raw(seq, path)
        write_meta(meta_path(path), seq, extra_meta)
        return
    path.mkdir(parents=True, exist_ok=True)
    for stale in path.glob(FRAME_GLOB):
        stale.unlink()
    for i, frame in enumerate(seq):
        _write_png(path / FRAME_PATTERN.format(index=i), frame)
    write_meta(path / META_FILE, seq, extra_meta)
    logger.debug(f"Saved {seq.num_frames} frames to {path}")


def _save_raw(seq: FrameSequence, path: Path) -> None:
    if seq.channels != 3:
        raise SequenceError("The raw format stores RGB sequences only")
    path.parent.mkdir(parents=True, exist_ok=True)
    header = struct.pack(
        RAW_HEADER, RAW_MAGIC, seq.width, seq.height, seq.num_frames
    )
    with path.open("wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(seq.data.transpose(0, 3, 1, 2)).tobytes())
