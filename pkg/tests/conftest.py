from collections.abc import Iterator
from pathlib import Path
from tempfile import TemporaryDirectory

import pytest

from physiq.bench import ScenarioRecord, load_manifest
from physiq.synthlab import write_mini_benchmark, write_replay_model


@pytest.fixture
def temp_dir() -> Iterator[Path]:
    with TemporaryDirectory(prefix="physiq.unittest.") as td:
        yield Path(td)


@pytest.fixture(scope="session")
def benchmark_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """Five-scenario synthetic benchmark, shared and read-only."""
    root = tmp_path_factory.mktemp("benchmark")
    write_mini_benchmark(root, seed=0)
    return root


@pytest.fixture(scope="session")
def benchmark_records(benchmark_dir: Path) -> list[ScenarioRecord]:
    return load_manifest(benchmark_dir)


@pytest.fixture(scope="session")
def replay_dir(
    benchmark_dir: Path, benchmark_records: list[ScenarioRecord]
) -> Path:
    """A model replaying the ground-truth continuations exactly."""
    return write_replay_model(benchmark_records, benchmark_dir / "replay")
