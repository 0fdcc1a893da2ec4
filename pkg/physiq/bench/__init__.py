from .conditioning import conditioning_input, write_conditioning
from .constants import (
    EPSILON,
    MODEL_FORMATS,
    PHYSICAL_VARIANCE,
    REFERENCE_RESULTS,
    Category,
    ModelFormat,
    Perspective,
    ReferenceResult,
)
from .dataset import (
    DatasetError,
    ScenarioKey,
    ScenarioRecord,
    ground_truth_records,
    group_takes,
    load_manifest,
    take_record,
    validate_manifest,
    write_manifest,
)
from .report import (
    load_report,
    read_report_csv,
    reference_summary,
    summary_rows,
    write_report,
    write_summary,
)
from .scoring import (
    CategoryRow,
    EvalReport,
    ReportError,
    ScenarioMetrics,
    build_report,
    category_breakdown,
    evaluate_model,
    normalize,
    physics_iq_score,
)
from .stats import mean_rank, mean_rank_table, pearson, spearman
from .variance import VarianceBaseline, compute_variance_baseline

__all__ = [
    "EPSILON",
    "MODEL_FORMATS",
    "PHYSICAL_VARIANCE",
    "REFERENCE_RESULTS",
    "Category",
    "CategoryRow",
    "DatasetError",
    "EvalReport",
    "ModelFormat",
    "Perspective",
    "ReferenceResult",
    "ReportError",
    "ScenarioKey",
    "ScenarioMetrics",
    "ScenarioRecord",
    "VarianceBaseline",
    "build_report",
    "category_breakdown",
    "compute_variance_baseline",
    "conditioning_input",
    "evaluate_model",
    "ground_truth_records",
    "group_takes",
    "load_manifest",
    "load_report",
    "mean_rank",
    "mean_rank_table",
    "normalize",
    "pearson",
    "physics_iq_score",
    "read_report_csv",
    "reference_summary",
    "spearman",
    "summary_rows",
    "take_record",
    "validate_manifest",
    "write_conditioning",
    "write_manifest",
    "write_report",
    "write_summary",
]
