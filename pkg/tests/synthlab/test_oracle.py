import numpy as np
import pytest

from physiq.frameseq import FrameSequence
from physiq.metrics import (
    Metric,
    SpatiotemporalMode,
    mean_squared_error,
    mse,
    spatial_iou,
    spatiotemporal_iou,
    weighted_spatial_iou,
)
from physiq.motionmask import (
    MapKind,
    MaskVideo,
    MotionMap,
    collapse_spatial,
    collapse_weighted,
    compute_mask_video,
)
from physiq.synthlab import (
    SceneError,
    SceneKind,
    SynthSpec,
    default_spec,
    oracle_frames,
    oracle_mask_video,
    oracle_metrics,
    oracle_motion_map,
    render_scenario,
)


def sliding_square() -> SynthSpec:
    """Full-height square crossing a 32x16 frame at 1 px per frame."""
    return SynthSpec(
        kind=SceneKind.TRANSLATING_SQUARE,
        duration=2.0,
        width=32,
        height=16,
        size=16,
        x0=8,
        y0=8,
        vx=1,
    )


def random_masks(
    rng: np.random.Generator, shape: tuple[int, int, int]
) -> tuple[MaskVideo, MaskVideo]:
    a = rng.random(shape) < rng.uniform(0.1, 0.9)
    b = rng.random(shape) < rng.uniform(0.1, 0.9)
    return MaskVideo(a), MaskVideo(b)


def test_oracle_frames() -> None:
    assert oracle_frames(default_spec(SceneKind.STATIC)) == range(24, 64)
    assert oracle_frames(sliding_square()) == range(16)


def test_oracle_static_is_empty() -> None:
    motion = oracle_motion_map(default_spec(SceneKind.STATIC))
    assert motion.kind is MapKind.BINARY
    assert not motion.data.any()


def test_oracle_translating_square() -> None:
    motion = oracle_motion_map(default_spec(SceneKind.TRANSLATING_SQUARE))
    rows, cols = np.nonzero(motion.data)
    assert (rows.min(), rows.max()) == (24, 39)
    assert (cols.min(), cols.max()) == (16, 55)
    assert motion.data.sum() == 40 * 16


def test_oracle_needs_noise_free_spec() -> None:
    spec = default_spec(SceneKind.FALLING_BALL, noise_amplitude=0.5)
    with pytest.raises(SceneError, match="noise-free"):
        oracle_mask_video(spec)


@pytest.mark.parametrize(
    ("kind", "minimum"),
    [
        pytest.param(SceneKind.STATIC, 1.0, id="static"),
        pytest.param(SceneKind.TRANSLATING_SQUARE, 0.8, id="square"),
    ],
)
def test_computed_mask_matches_oracle(
    kind: SceneKind, minimum: float
) -> None:
    spec = default_spec(kind)
    frames = oracle_frames(spec)
    segment = render_scenario(spec).slice(frames.start, frames.stop)
    computed = collapse_spatial(compute_mask_video(segment))
    value = spatial_iou(computed, oracle_motion_map(spec)).value
    assert minimum <= value <= 1.0


def test_oracle_metrics_match_vectorized() -> None:
    rng = np.random.default_rng(7)
    for _ in range(50):
        shape = (
            int(rng.integers(1, 6)),
            int(rng.integers(1, 9)),
            int(rng.integers(1, 9)),
        )
        a, b = random_masks(rng, shape)
        expected = [
            spatial_iou(collapse_spatial(a), collapse_spatial(b)),
            spatiotemporal_iou(a, b, SpatiotemporalMode.VOLUME),
            spatiotemporal_iou(a, b, SpatiotemporalMode.FRAME_MEAN),
            weighted_spatial_iou(collapse_weighted(a), collapse_weighted(b)),
        ]
        values = oracle_metrics(a, b)
        assert values[:4] == expected
        assert values[4].name is Metric.MSE
        assert values[4].value == mean_squared_error(a.data, b.data, 1.0)


def test_oracle_frame_mse_matches_vectorized() -> None:
    rng = np.random.default_rng(3)
    a = FrameSequence(rng.integers(0, 256, (4, 6, 5, 3), dtype=np.uint8), 8)
    b = FrameSequence(rng.integers(0, 256, (4, 6, 5, 3), dtype=np.uint8), 8)
    assert oracle_metrics(a, b) == [mse(a, b)]


def test_oracle_weighted_maps() -> None:
    a = MotionMap(np.array([[0.0, 0.5], [1.0, 0.25]]), MapKind.WEIGHTED)
    b = MotionMap(np.array([[0.5, 0.5], [0.0, 0.75]]), MapKind.WEIGHTED)
    values = oracle_metrics(a, b)
    assert [v.name for v in values] == [
        Metric.WEIGHTED_SPATIAL_IOU,
        Metric.MSE,
    ]
    assert values[0].value == pytest.approx(0.75 / 2.75)
    assert values[0] == weighted_spatial_iou(a, b)


def test_oracle_identical_inputs() -> None:
    mask = oracle_mask_video(sliding_square())
    values = oracle_metrics(mask, mask)
    assert [v.value for v in values] == [1.0, 1.0, 1.0, 1.0, 0.0]


def test_oracle_disjoint_inputs() -> None:
    a = np.zeros((2, 4, 4), dtype=np.bool_)
    b = np.zeros((2, 4, 4), dtype=np.bool_)
    a[:, 0, 0] = True
    b[:, 3, 3] = True
    values = oracle_metrics(MaskVideo(a), MaskVideo(b))
    assert [v.value for v in values[:4]] == [0.0, 0.0, 0.0, 0.0]
    assert values[4].value == pytest.approx(4 / 32)


def test_oracle_temporal_sensitivity() -> None:
    mask = oracle_mask_video(sliding_square())
    assert mask.shape == (16, 16, 32)
    previous = 1.0
    for shift in range(1, 9):
        shifted = MaskVideo(np.roll(mask.data, shift, axis=0), mask.fps)
        values = oracle_metrics(mask, shifted)
        assert values[0].value == 1.0
        overlap = 256 - 32 * shift + 2 * shift * shift
        assert values[1].value == pytest.approx(overlap / (512 - overlap))
        assert values[1] == spatiotemporal_iou(mask, shifted)
        assert values[1].value < previous
        previous = values[1].value
    assert previous == pytest.approx(1 / 3)


def test_weighted_map_favors_dwell_time() -> None:
    spec = SynthSpec(
        kind=SceneKind.PENDULUM,
        duration=2.0,
        width=32,
        height=32,
        size=8,
        x0=16,
        y0=4,
        length=20,
        amplitude=0.3,
        period=16,
    )
    weighted = collapse_weighted(oracle_mask_video(spec)).data
    row = weighted[23]
    cols = np.flatnonzero(row)
    assert (cols.min(), cols.max()) == (6, 25)
    assert row[16] == 0.5
    assert row[cols.min()] <= 2 / 16
    assert row[cols.max()] <= 2 / 16
    assert row[16] > max(row[cols.min()], row[cols.max()])


def test_oracle_input_checks() -> None:
    mask = MaskVideo(np.zeros((2, 4, 4), dtype=np.bool_))
    motion = collapse_spatial(mask)
    with pytest.raises(SceneError, match="differ in type"):
        oracle_metrics(mask, motion)
    other = MaskVideo(np.zeros((2, 4, 5), dtype=np.bool_))
    with pytest.raises(SceneError, match="shape mismatch"):
        oracle_metrics(mask, other)
    large = MaskVideo(np.zeros((17, 4, 4), dtype=np.bool_))
    with pytest.raises(SceneError, match="exceeds"):
        oracle_metrics(large, large)
    wide = MotionMap(np.zeros((4, 33)), MapKind.BINARY)
    with pytest.raises(SceneError, match="exceeds"):
        oracle_metrics(wide, wide)
