from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from physiq.metrics import Metric


class Category(StrEnum):
    SOLID_MECHANICS = "solid mechanics"
    FLUID_DYNAMICS = "fluid dynamics"
    OPTICS = "optics"
    THERMODYNAMICS = "thermodynamics"
    MAGNETISM = "magnetism"


class Perspective(StrEnum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


TAKES = (1, 2)
# Take 1 holds the ground truth, take 2 the physical-variance partner
GROUND_TRUTH_TAKE = 1
VARIANCE_TAKE = 2
NUM_SCENARIOS = 66

# Floor for baselines and model mse in score normalization
EPSILON = 1e-6

MANIFEST_FILE = "dataset.json"
VARIANCE_LABEL = "Physical Variance"


@dataclass(frozen=True)
class ReferenceResult:
    """Published dataset-level result row for one model."""

    model: str
    spatial_iou: float
    spatiotemporal_iou: float
    weighted_spatial_iou: float
    mse: float
    physics_iq: float
    # 2AFC identification accuracy (%), where published
    mllm: float | None = None

    def metrics(self) -> dict[Metric, float]:
        return {m: getattr(self, str(m)) for m in Metric}


PHYSICAL_VARIANCE = ReferenceResult(
    VARIANCE_LABEL, 0.645, 0.512, 0.626, 0.002, 100.0
)

REFERENCE_RESULTS = (
    ReferenceResult(
        "VideoPoet (multiframe)", 0.245, 0.143, 0.054, 0.010, 24.1, 77.3
    ),
    ReferenceResult(
        "Runway Gen 3 (i2v)", 0.220, 0.109, 0.044, 0.015, 18.4, 74.8
    ),
    ReferenceResult(
        "Lumiere (multiframe)", 0.170, 0.146, 0.034, 0.013, 18.2, 86.9
    ),
    ReferenceResult("VideoPoet (i2v)", 0.175, 0.106, 0.057, 0.012, 18.0),
    ReferenceResult("Lumiere (i2v)", 0.138, 0.165, 0.024, 0.016, 17.1),
    ReferenceResult(
        "Stable Video Diffusion (i2v)", 0.139, 0.054, 0.088, 0.021, 13.5
    ),
    ReferenceResult("Pika 1.0 (i2v)", 0.151, 0.034, 0.026, 0.014, 9.5),
    ReferenceResult("Sora (i2v)", 0.142, 0.041, 0.055, 0.036, 8.7, 55.6),
)

# Physics-IQ vs. mean rank across the eight models
REFERENCE_SPEARMAN = -0.87
# Physics-IQ vs. MLLM accuracy
REFERENCE_PEARSON = -0.46
REFERENCE_PEARSON_P = 0.247


@dataclass(frozen=True)
class ModelFormat:
    name: str
    fps: float
    width: int
    height: int
    # Accepts several conditioning frames rather than a single image
    multiframe: bool = False

    @property
    def size(self) -> tuple[int, int]:
        return (self.width, self.height)

    @property
    def conditioning(self) -> str:
        return "multiframe" if self.multiframe else "i2v"


MODEL_FORMATS = {
    f.name: f
    for f in (
        ModelFormat("videopoet-i2v", 8, 224, 128),
        ModelFormat("videopoet-multiframe", 8, 224, 128, multiframe=True),
        ModelFormat("lumiere-i2v", 16, 128, 128),
        ModelFormat("lumiere-multiframe", 16, 128, 128, multiframe=True),
        ModelFormat("svd-i2v", 8, 1024, 576),
        ModelFormat("runway-gen3-i2v", 24, 1280, 768),
        ModelFormat("pika-1.0-i2v", 24, 1280, 720),
        ModelFormat("sora-i2v", 30, 854, 480),
    )
}
