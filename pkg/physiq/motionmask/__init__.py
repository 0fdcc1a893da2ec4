from .mask import (
    MapKind,
    MaskVideo,
    MotionMap,
    collapse_spatial,
    collapse_weighted,
    compute_mask_video,
    load_mask_video,
    preprocess_frame,
    save_mask_video,
    to_grayscale,
)
from .params import MaskError, MaskParams

__all__ = [
    "MapKind",
    "MaskError",
    "MaskParams",
    "MaskVideo",
    "MotionMap",
    "collapse_spatial",
    "collapse_weighted",
    "compute_mask_video",
    "load_mask_video",
    "preprocess_frame",
    "save_mask_video",
    "to_grayscale",
]
