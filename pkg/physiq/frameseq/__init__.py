from .io import load_sequence, read_meta, save_sequence
from .resample import resample_fps
from .sequence import (
    Frame,
    FrameSequence,
    SequenceError,
    SplitSpec,
    split_at_switch,
)

__all__ = [
    "Frame",
    "FrameSequence",
    "SequenceError",
    "SplitSpec",
    "load_sequence",
    "read_meta",
    "resample_fps",
    "save_sequence",
    "split_at_switch",
]
