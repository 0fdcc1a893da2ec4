from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, NamedTuple

from physiq.frameseq import (
    FrameSequence,
    SplitSpec,
    load_sequence,
    split_at_switch,
)

from .constants import (
    GROUND_TRUTH_TAKE,
    MANIFEST_FILE,
    NUM_SCENARIOS,
    TAKES,
    Category,
    Perspective,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

logger = logging.getLogger(__name__)


class DatasetError(ValueError):
    pass


class ScenarioKey(NamedTuple):
    scenario_id: str
    perspective: Perspective


@dataclass(frozen=True)
class ScenarioRecord:
    """One recorded take of a scenario from one camera perspective."""

    scenario_id: str
    category: Category
    perspective: Perspective
    take: int
    # Last conditioning frame, in the recording's own frame rate
    switch_index: int
    path: Path

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "category", Category(self.category))
        except ValueError as e:
            raise DatasetError(
                f"Unknown category {self.category!r} for {self.scenario_id}"
            ) from e
        try:
            object.__setattr__(
                self, "perspective", Perspective(self.perspective)
            )
        except ValueError as e:
            raise DatasetError(
                f"Unknown perspective {self.perspective!r}"
                f" for {self.scenario_id}"
            ) from e
        if self.take not in TAKES:
            raise DatasetError(
                f"Take must be one of {TAKES}, got {self.take}"
                f" for {self.scenario_id}"
            )
        if self.switch_index < 0:
            raise DatasetError(
                f"Negative switch_index for {self.scenario_id}"
            )
        object.__setattr__(self, "path", Path(self.path))

    @property
    def key(self) -> ScenarioKey:
        return ScenarioKey(self.scenario_id, self.perspective)

    def load(self) -> FrameSequence:
        return load_sequence(self.path)

    def test_segment(self, seq: FrameSequence | None = None) -> FrameSequence:
        """The continuation after the switch frame."""
        seq = seq if seq is not None else self.load()
        return split_at_switch(seq, SplitSpec(self.switch_index))[1]

    def to_dict(self, root: Path) -> dict[str, Any]:
        try:
            path = self.path.relative_to(root)
        except ValueError:
            path = self.path
        return {
            "scenario_id": self.scenario_id,
            "category": str(self.category),
            "perspective": str(self.perspective),
            "take": self.take,
            "switch_index": self.switch_index,
            "path": path.as_posix(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], root: Path) -> ScenarioRecord:
        try:
            return cls(
                scenario_id=str(data["scenario_id"]),
                category=data["category"],
                perspective=data["perspective"],
                take=int(data["take"]),
                switch_index=int(data["switch_index"]),
                path=root / data["path"],
            )
        except KeyError as e:
            raise DatasetError(f"Manifest entry lacks {e.args[0]!r}") from e


def _sort_key(record: ScenarioRecord) -> tuple[str, int, int]:
    return (
        record.scenario_id,
        list(Perspective).index(record.perspective),
        record.take,
    )


def manifest_file(path: str | Path) -> Path:
    path = Path(path)
    return path / MANIFEST_FILE if path.is_dir() else path


def load_manifest(path: str | Path) -> list[ScenarioRecord]:
    """Read `dataset.json`; entry paths resolve against its directory."""
    path = manifest_file(path)
    if not path.is_file():
        raise DatasetError(f"Manifest not found: {path}")
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DatasetError(f"Unreadable manifest {path}: {e}") from e
    if not isinstance(entries, list):
        raise DatasetError(f"Manifest {path} must hold a list of records")
    records = [ScenarioRecord.from_dict(e, path.parent) for e in entries]
    logger.debug(f"Loaded {len(records)} records from {path}")
    return records


def write_manifest(
    records: Iterable[ScenarioRecord], path: str | Path
) -> Path:
    path = manifest_file(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries = [r.to_dict(path.parent) for r in sorted(records, key=_sort_key)]
    path.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
    return path


def group_takes(
    records: Iterable[ScenarioRecord],
) -> dict[ScenarioKey, dict[int, ScenarioRecord]]:
    """Records by (scenario, perspective), then by take, in stable order."""
    groups: dict[ScenarioKey, dict[int, ScenarioRecord]] = defaultdict(dict)
    for record in sorted(records, key=_sort_key):
        groups[record.key][record.take] = record
    return dict(groups)


def take_record(
    key: ScenarioKey,
    takes: dict[int, ScenarioRecord],
    take: int = GROUND_TRUTH_TAKE,
) -> ScenarioRecord:
    if take not in takes:
        raise DatasetError(
            f"Missing take {take} for {key.scenario_id} {key.perspective}"
        )
    return takes[take]


def ground_truth_records(
    records: Iterable[ScenarioRecord],
) -> list[ScenarioRecord]:
    """Take 1 of every (scenario, perspective), in stable order."""
    return [take_record(k, t) for k, t in group_takes(records).items()]


def validate_manifest(
    records: Iterable[ScenarioRecord],
    *,
    partial: bool = False,
    check_paths: bool = True,
) -> list[str]:
    """Every problem found in a manifest; an empty list means valid.

    A complete dataset has every scenario from all three perspectives with
    both takes. With `partial`, missing perspectives and scenarios are
    allowed, but each present (scenario, perspective) still needs both
    takes.
    """
    records = list(records)
    problems: list[str] = []
    seen: set[tuple[str, Perspective, int]] = set()
    categories: dict[str, set[Category]] = defaultdict(set)
    for r in records:
        ident = (r.scenario_id, r.perspective, r.take)
        if ident in seen:
            problems.append(
                f"Duplicate record: {r.scenario_id} {r.perspective}"
                f" take {r.take}"
            )
        seen.add(ident)
        categories[r.scenario_id].add(r.category)
        if check_paths and not r.path.exists():
            problems.append(f"Missing recording: {r.path}")
    for scenario_id, cats in sorted(categories.items()):
        if len(cats) > 1:
            problems.append(
                f"Inconsistent categories for {scenario_id}:"
                f" {', '.join(sorted(cats))}"
            )
    groups = group_takes(records)
    for key, takes in groups.items():
        missing = [t for t in TAKES if t not in takes]
        if missing:
            problems.append(
                f"Missing take {', '.join(map(str, missing))} for"
                f" {key.scenario_id} {key.perspective}"
            )
        switches = {r.switch_index for r in takes.values()}
        if len(switches) > 1:
            problems.append(
                f"Mismatched switch_index between takes for"
                f" {key.scenario_id} {key.perspective}:"
                f" {sorted(switches)}"
            )
    if not partial:
        if len(categories) != NUM_SCENARIOS:
            problems.append(
                f"Expected {NUM_SCENARIOS} scenarios, found {len(categories)}"
            )
        for scenario_id in sorted(categories):
            absent = [
                str(p)
                for p in Perspective
                if ScenarioKey(scenario_id, p) not in groups
            ]
            if absent:
                problems.append(
                    f"Missing perspectives for {scenario_id}:"
                    f" {', '.join(absent)}"
                )
    return problems
