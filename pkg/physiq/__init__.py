"""Physical-plausibility evaluation toolkit for generated video."""

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as import_version

from .config import EvalConfig
from .metrics import Metric, MetricValue, SpatiotemporalMode, evaluate_pair

try:
    version = import_version(__name__)
except PackageNotFoundError:  # pragma: no cover
    version = "0.0.0"

__all__ = [
    "EvalConfig",
    "Metric",
    "MetricValue",
    "SpatiotemporalMode",
    "evaluate_pair",
    "version",
]
