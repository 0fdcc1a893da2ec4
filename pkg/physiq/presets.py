from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, ClassVar, Self


@dataclass(frozen=True, init=False)
class Preset:
    name: str
    overrides: dict[str, Any] = field(default_factory=dict)

    def __init__(self, name: str, **overrides: Any) -> None:
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "overrides", overrides)


class Presettable:
    """Mixin for frozen parameter dataclasses with named presets."""

    presets: ClassVar[tuple[Preset, ...]] = ()

    @classmethod
    def preset_names(cls) -> list[str]:
        return [p.name for p in cls.presets]

    @classmethod
    def with_preset(cls, preset: str | None = None, **overrides: Any) -> Self:
        values: dict[str, Any] = {}
        if preset is not None:
            for p in cls.presets:
                if p.name == preset:
                    values.update(p.overrides)
                    break
            else:
                raise ValueError(
                    f"Unknown {cls.__name__} preset {preset!r}"
                    f" (available: {', '.join(cls.preset_names())})"
                )
        values.update(overrides)
        return cls(**values)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> Self:
        data = dict(data)
        preset = data.pop("preset", None)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ValueError(
                f"Unknown {cls.__name__} keys: {', '.join(unknown)}"
            )
        return cls.with_preset(preset, **data)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)
