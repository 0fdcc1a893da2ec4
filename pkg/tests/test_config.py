import json
from pathlib import Path
from typing import Any

import pytest

from physiq.config import EvalConfig
from physiq.metrics import SpatiotemporalMode
from physiq.motionmask import MaskParams


def test_defaults() -> None:
    config = EvalConfig()
    assert config.mask == MaskParams()
    assert config.spatiotemporal_mode is SpatiotemporalMode.VOLUME
    assert config.workers == 4
    assert config.compare_seconds == 5.0


def test_from_toml(temp_dir: Path) -> None:
    path = temp_dir / "params.toml"
    path.write_text(
        "[mask]\n"
        'preset = "coarse"\n'
        "update_rate = 0.1\n"
        "\n"
        "[evaluation]\n"
        'spatiotemporal_mode = "frame-mean"\n'
        "workers = 2\n"
    )
    config = EvalConfig.from_file(path)
    assert config.mask == MaskParams.with_preset(
        "coarse", update_rate=0.1
    )
    assert config.mask.threshold == 35.0
    assert config.spatiotemporal_mode is SpatiotemporalMode.FRAME_MEAN
    assert config.workers == 2


def test_from_json(temp_dir: Path) -> None:
    path = temp_dir / "params.json"
    path.write_text(json.dumps({"mask": {"threshold": 15}}))
    config = EvalConfig.from_file(path)
    assert config.mask.threshold == 15
    assert config.workers == 4


def test_round_trip(temp_dir: Path) -> None:
    config = EvalConfig(
        MaskParams.with_preset("sensitive"),
        SpatiotemporalMode.FRAME_MEAN,
        workers=1,
        compare_seconds=2.5,
    )
    assert EvalConfig.from_mapping(config.to_dict()) == config
    path = temp_dir / "params.json"
    path.write_text(json.dumps(config.to_dict()))
    assert EvalConfig.from_file(path) == config


@pytest.mark.parametrize(
    ("data", "match"),
    [
        pytest.param({"output": {}}, "Unknown config tables", id="table"),
        pytest.param(
            {"evaluation": {"threads": 2}},
            "Unknown evaluation keys: threads",
            id="evaluation-key",
        ),
        pytest.param(
            {"mask": {"tau": 20}}, "Unknown MaskParams keys", id="mask-key"
        ),
        pytest.param(
            {"mask": {"preset": "bold"}},
            "Unknown MaskParams preset",
            id="preset",
        ),
        pytest.param(
            {"evaluation": {"spatiotemporal_mode": "sum"}},
            "is not a valid SpatiotemporalMode",
            id="mode",
        ),
        pytest.param(
            {"evaluation": {"workers": 0}}, "workers must be", id="workers"
        ),
        pytest.param(
            {"evaluation": {"compare_seconds": 0}},
            "compare_seconds must be positive",
            id="seconds",
        ),
    ],
)
def test_invalid_mapping(data: dict[str, Any], match: str) -> None:
    with pytest.raises(ValueError, match=match):
        EvalConfig.from_mapping(data)


def test_from_file_not_a_table(temp_dir: Path) -> None:
    path = temp_dir / "params.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError, match="must hold a table"):
        EvalConfig.from_file(path)
