from pathlib import Path

import numpy as np
import pytest

from physiq.frameseq import FrameSequence, save_sequence
from physiq.motionmask import (
    MapKind,
    MaskError,
    MaskParams,
    MaskVideo,
    MotionMap,
    collapse_spatial,
    collapse_weighted,
    compute_mask_video,
    load_mask_video,
    save_mask_video,
    to_grayscale,
)


def moving_square(num_frames: int = 16) -> FrameSequence:
    """A 12 px square moving 2 px/frame to the right over black."""
    data = np.zeros((num_frames, 64, 64, 3), dtype=np.uint8)
    for t in range(num_frames):
        x = 4 + 2 * t
        data[t, 26:38, x : x + 12] = 200
    return FrameSequence(data, 8)


@pytest.mark.parametrize(
    ("preset", "threshold", "morph_kernel"),
    [
        pytest.param(None, 25.0, 3, id="none"),
        pytest.param("default", 25.0, 3, id="default"),
        pytest.param("sensitive", 15.0, 3, id="sensitive"),
        pytest.param("coarse", 35.0, 5, id="coarse"),
    ],
)
def test_mask_params_presets(
    preset: str | None, threshold: float, morph_kernel: int
) -> None:
    params = MaskParams.with_preset(preset)
    assert params.threshold == threshold
    assert params.morph_kernel == morph_kernel


def test_mask_params_from_mapping() -> None:
    params = MaskParams.from_mapping({"preset": "coarse", "window": 3})
    assert params == MaskParams(threshold=35.0, window=3, morph_kernel=5)
    with pytest.raises(ValueError, match="Unknown MaskParams keys: tau"):
        MaskParams.from_mapping({"tau": 3})
    with pytest.raises(ValueError, match="preset 'fine'"):
        MaskParams.with_preset("fine")


@pytest.mark.parametrize(
    "overrides",
    [
        pytest.param({"threshold": 0}, id="threshold"),
        pytest.param({"update_rate": 1.0}, id="update-rate"),
        pytest.param({"window": 0}, id="window"),
        pytest.param({"blur_sigma": 0}, id="sigma"),
        pytest.param({"morph_kernel": 0}, id="kernel"),
    ],
)
def test_mask_params_invalid(overrides: dict[str, float]) -> None:
    with pytest.raises(MaskError):
        MaskParams(**overrides)


def test_to_grayscale() -> None:
    frame = np.zeros((2, 2, 3), dtype=np.uint8)
    frame[..., 1] = 255
    assert to_grayscale(frame).shape == (2, 2)
    assert to_grayscale(frame)[0, 0] == 150
    single = np.full((2, 2, 1), 7, dtype=np.uint8)
    assert (to_grayscale(single) == 7).all()


def test_mask_static_video() -> None:
    data = np.full((8, 16, 16, 3), 90, dtype=np.uint8)
    data[:, 4:8, 4:8] = 200
    mask = compute_mask_video(FrameSequence(data, 8))
    assert mask.shape == (8, 16, 16)
    assert mask.fps == 8.0
    assert not mask.data.any()


def test_mask_moving_square() -> None:
    mask = compute_mask_video(moving_square())
    assert mask.shape == (16, 64, 64)
    # Square interior at frame 12 spans x 28..39, y 26..37
    assert mask.data[12, 32, 34]
    assert not mask.data[12, 2, 60]
    assert not mask.data[:, 50:, :].any()


def test_mask_threshold_monotone() -> None:
    seq = moving_square()
    sensitive = compute_mask_video(seq, MaskParams.with_preset("sensitive"))
    default = compute_mask_video(seq, MaskParams())
    assert sensitive.data.sum() >= default.data.sum() > 0


def test_mask_too_few_frames() -> None:
    with pytest.raises(MaskError, match="background window"):
        compute_mask_video(moving_square(4), MaskParams(window=5))


def test_mask_video_values() -> None:
    with pytest.raises(MaskError, match="0 or 1"):
        MaskVideo(np.full((1, 2, 2), 2))
    with pytest.raises(MaskError, match=r"\(t, h, w\)"):
        MaskVideo(np.zeros((2, 2), dtype=bool))
    mask = MaskVideo(np.ones((1, 2, 2), dtype=np.uint8))
    assert mask.data.dtype == np.bool_


def test_collapse() -> None:
    data = np.zeros((4, 2, 3), dtype=bool)
    data[0, 0, 0] = True
    data[:, 1, 2] = True
    data[1:3, 0, 1] = True
    mask = MaskVideo(data)

    spatial = collapse_spatial(mask)
    assert spatial.kind is MapKind.BINARY
    np.testing.assert_array_equal(spatial.data, [[1, 1, 0], [0, 0, 1]])

    weighted = collapse_weighted(mask)
    assert weighted.kind is MapKind.WEIGHTED
    np.testing.assert_allclose(
        weighted.data, [[0.25, 0.5, 0.0], [0.0, 0.0, 1.0]]
    )


def test_collapse_invariants() -> None:
    rng = np.random.default_rng(3)
    for _ in range(200):
        t, h, w = (int(v) for v in rng.integers(1, (8, 7, 7)))
        data = rng.random((t, h, w)) < rng.uniform()
        spatial = collapse_spatial(MaskVideo(data)).data
        weighted = collapse_weighted(MaskVideo(data)).data
        assert (weighted <= spatial).all()
        np.testing.assert_array_equal(spatial == 1, weighted > 0)

        # Turning one voxel on never lowers either map
        k, y, x = (int(rng.integers(n)) for n in (t, h, w))
        more = data.copy()
        more[k, y, x] = True
        assert (collapse_spatial(MaskVideo(more)).data >= spatial).all()
        assert (collapse_weighted(MaskVideo(more)).data >= weighted).all()


@pytest.mark.parametrize(
    ("data", "kind"),
    [
        pytest.param([[0.5, 1.0]], MapKind.BINARY, id="binary"),
        pytest.param([[1.5, 0.0]], MapKind.WEIGHTED, id="range"),
        pytest.param([0.5, 1.0], MapKind.WEIGHTED, id="ndim"),
    ],
)
def test_motion_map_invalid(data: list[float], kind: MapKind) -> None:
    with pytest.raises(MaskError):
        MotionMap(np.asarray(data), kind)


def test_save_load_mask_video(temp_dir: Path) -> None:
    mask = compute_mask_video(moving_square())
    save_mask_video(mask, temp_dir / "mask", {"threshold": 25.0})
    loaded = load_mask_video(temp_dir / "mask")
    assert loaded.fps == mask.fps
    np.testing.assert_array_equal(loaded.data, mask.data)


def test_load_mask_video_rgb(temp_dir: Path) -> None:
    save_sequence(moving_square(2), temp_dir / "rgb")
    with pytest.raises(MaskError, match="single-channel"):
        load_mask_video(temp_dir / "rgb")
