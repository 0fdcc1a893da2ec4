from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeAlias

import numpy as np

from .constants import CONDITIONING_SECONDS, TEST_SECONDS

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

# A single (height, width, channels) uint8 image
Frame: TypeAlias = np.ndarray


class SequenceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FrameSequence:
    """Immutable stack of equally sized 8-bit frames at a fixed rate.

    `data` has shape (frames, height, width, channels); RGB sequences have
    three channels, mask and grayscale sequences one.
    """

    data: np.ndarray
    fps: float

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 4:
            raise SequenceError(
                f"Frame data must be (frames, height, width, channels),"
                f" got shape {data.shape}"
            )
        if data.shape[0] < 1:
            raise SequenceError("A frame sequence needs at least one frame")
        if data.shape[1] < 1 or data.shape[2] < 1:
            raise SequenceError(f"Zero-sized frames: {data.shape[1:3]}")
        if data.dtype != np.uint8:
            raise SequenceError(f"Frames must be uint8, got {data.dtype}")
        if not self.fps > 0:
            raise SequenceError(f"fps must be positive, got {self.fps}")
        if data.flags.writeable:
            data = data.copy()
            data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "fps", float(self.fps))

    @classmethod
    def from_frames(
        cls, frames: Sequence[Frame], fps: float
    ) -> FrameSequence:
        if not frames:
            raise SequenceError("A frame sequence needs at least one frame")
        arrays = [np.asarray(f) for f in frames]
        arrays = [a[..., np.newaxis] if a.ndim == 2 else a for a in arrays]
        shapes = {a.shape for a in arrays}
        if len(shapes) != 1:
            raise SequenceError(
                f"Inhomogeneous frame sizes: {sorted(shapes)}"
            )
        return cls(np.stack(arrays), fps)

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
    def channels(self) -> int:
        return int(self.data.shape[3])

    @property
    def duration(self) -> float:
        """Length in seconds (frame count ÷ fps)."""
        return self.num_frames / self.fps

    def __len__(self) -> int:
        return self.num_frames

    def __iter__(self) -> Iterator[Frame]:
        return iter(self.data)

    def frame(self, index: int) -> Frame:
        return self.data[index]

    def slice(self, start: int, stop: int) -> FrameSequence:
        """Frames `start` up to `stop`, which must lie inside the clip."""
        if not 0 <= start < stop <= self.num_frames:
            raise SequenceError(
                f"Frame range [{start}, {stop}) is outside"
                f" 0..{self.num_frames}"
            )
        return FrameSequence(self.data[start:stop], self.fps)

    def concat(self, other: FrameSequence) -> FrameSequence:
        if other.fps != self.fps:
            raise SequenceError(
                f"Cannot concatenate {self.fps} fps and {other.fps} fps"
            )
        if other.data.shape[1:] != self.data.shape[1:]:
            raise SequenceError("Cannot concatenate differently sized frames")
        return FrameSequence(
            np.concatenate([self.data, other.data]), self.fps
        )


@dataclass(frozen=True)
class SplitSpec:
    # Index of the switch frame, the last conditioning frame (0-based)
    switch_index: int
    conditioning_seconds: float = CONDITIONING_SECONDS
    test_seconds: float = TEST_SECONDS

    def __post_init__(self) -> None:
        if self.switch_index < 0:
            raise SequenceError(
                f"switch_index must be >= 0, got {self.switch_index}"
            )

    @classmethod
    def for_fps(cls, fps: float) -> SplitSpec:
        return cls(switch_index=round(CONDITIONING_SECONDS * fps) - 1)

    def test_frames(self, fps: float) -> int:
        return round(self.test_seconds * fps)


def split_at_switch(
    seq: FrameSequence, spec: SplitSpec
) -> tuple[FrameSequence, FrameSequence]:
    """Split a recording into conditioning and test segments.

    The conditioning segment ends with the switch frame; the test segment
    holds the following `test_seconds` worth of frames.
    """
    start = spec.switch_index + 1
    stop = start + spec.test_frames(seq.fps)
    if stop > seq.num_frames:
        raise SequenceError(
            f"Sequence too short to split: {seq.num_frames} frames at"
            f" {seq.fps:g} fps, need {stop} (switch frame"
            f" {spec.switch_index} + {stop - start} test frames)"
        )
    return seq.slice(0, start), seq.slice(start, stop)
