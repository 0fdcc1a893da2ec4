from .benchmark import (
    MINI_BENCHMARK_KINDS,
    add_pixel_noise,
    scenario_id,
    write_mini_benchmark,
    write_replay_model,
)
from .oracle import (
    oracle_frames,
    oracle_mask_video,
    oracle_metrics,
    oracle_motion_map,
)
from .scenes import (
    SceneError,
    SceneKind,
    SynthSpec,
    check_bounds,
    default_spec,
    footprint,
    render_scenario,
)

__all__ = [
    "MINI_BENCHMARK_KINDS",
    "SceneError",
    "SceneKind",
    "SynthSpec",
    "add_pixel_noise",
    "check_bounds",
    "default_spec",
    "footprint",
    "oracle_frames",
    "oracle_mask_video",
    "oracle_metrics",
    "oracle_motion_map",
    "render_scenario",
    "scenario_id",
    "write_mini_benchmark",
    "write_replay_model",
]
