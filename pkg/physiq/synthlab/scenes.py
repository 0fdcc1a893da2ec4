from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import StrEnum
from typing import NamedTuple

import numpy as np

from physiq.bench.constants import Category
from physiq.frameseq import FrameSequence
from physiq.presets import Preset, Presettable

# Bounds of the take-2 perturbation at noise_amplitude 1
POSITION_JITTER = 2.0
SPEED_JITTER = 0.05
# Pendulum positions snap to multiples of 1/FIXED_POINT pixels
FIXED_POINT = 256


class SceneError(ValueError):
    pass


class SceneKind(StrEnum):
    STATIC = "static"
    TRANSLATING_SQUARE = "translating-square"
    FALLING_BALL = "falling-ball"
    PENDULUM = "pendulum"
    DIFFUSING_BLOB = "diffusing-blob"

    @property
    def category(self) -> Category:
        return KIND_CATEGORIES[self]

    @property
    def square(self) -> bool:
        return self in (SceneKind.STATIC, SceneKind.TRANSLATING_SQUARE)


KIND_CATEGORIES = {
    SceneKind.STATIC: Category.OPTICS,
    SceneKind.TRANSLATING_SQUARE: Category.SOLID_MECHANICS,
    SceneKind.FALLING_BALL: Category.SOLID_MECHANICS,
    SceneKind.PENDULUM: Category.SOLID_MECHANICS,
    SceneKind.DIFFUSING_BLOB: Category.FLUID_DYNAMICS,
}


class ObjectState(NamedTuple):
    cx: float
    cy: float
    # Half the square side, or the disk radius
    half: float


@dataclass(frozen=True)
class SynthSpec(Presettable):
    kind: SceneKind = SceneKind.STATIC
    duration: float = 8.0
    fps: float = 8.0
    width: int = 64
    height: int = 64
    # Square side or disk diameter (pixels)
    size: float = 12.0
    # Initial object center; the pivot for pendulums (pixels)
    x0: float = 32.0
    y0: float = 32.0
    # Constant velocity (pixels/frame)
    vx: float = 0.0
    vy: float = 0.0
    # Downward acceleration (pixels/frame²)
    gravity: float = 0.0
    # Pendulum arm length (pixels)
    length: float = 0.0
    # Pendulum swing amplitude (radians)
    amplitude: float = 0.0
    # Pendulum period (frames)
    period: float = 0.0
    # Disk radius growth (pixels/frame)
    growth: float = 0.0
    noise_seed: int = 0
    # Scales the take-2 perturbation, in [0, 1]
    noise_amplitude: float = 0.0
    intensity: int = 200

    presets = (
        Preset("static", kind=SceneKind.STATIC),
        Preset(
            "translating-square",
            kind=SceneKind.TRANSLATING_SQUARE,
            size=16.0,
            x0=10.0,
            vx=0.6,
        ),
        Preset(
            "falling-ball",
            kind=SceneKind.FALLING_BALL,
            size=10.0,
            y0=8.0,
            gravity=0.02,
        ),
        Preset(
            "pendulum",
            kind=SceneKind.PENDULUM,
            size=10.0,
            y0=8.0,
            length=36.0,
            amplitude=0.35,
            period=32.0,
        ),
        Preset(
            "diffusing-blob",
            kind=SceneKind.DIFFUSING_BLOB,
            size=8.0,
            growth=0.3,
        ),
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SceneKind(self.kind))
        if self.duration <= 0 or self.fps <= 0:
            raise SceneError(
                f"duration and fps must be positive: {self.duration},"
                f" {self.fps}"
            )
        if self.width < 1 or self.height < 1:
            raise SceneError(f"Invalid frame size {self.width}x{self.height}")
        if self.size <= 0:
            raise SceneError(f"Object size must be positive: {self.size}")
        if not 0 <= self.noise_amplitude <= 1:
            raise SceneError(
                f"noise_amplitude must be in [0, 1]: {self.noise_amplitude}"
            )
        if not 0 < self.intensity <= 255:
            raise SceneError(
                f"intensity must be in (0, 255]: {self.intensity}"
            )
        if self.kind is SceneKind.PENDULUM and (
            self.length <= 0 or self.period <= 0
        ):
            raise SceneError("Pendulums need a positive length and period")

    @property
    def num_frames(self) -> int:
        return max(1, round(self.duration * self.fps))

    @property
    def noisy(self) -> bool:
        return self.noise_amplitude > 0

    def perturbed(self, take: int) -> SynthSpec:
        """Trajectory parameters for a take; take 2 gets seeded jitter."""
        if take not in (1, 2):
            raise SceneError(f"take must be 1 or 2, got {take}")
        if take == 1 or not self.noisy:
            return self
        rng = np.random.default_rng(self.noise_seed)
        dx, dy = rng.uniform(-POSITION_JITTER, POSITION_JITTER, size=2)
        jitter = float(rng.uniform(-SPEED_JITTER, SPEED_JITTER))
        speed = 1.0 + jitter * self.noise_amplitude
        return replace(
            self,
            x0=self.x0 + float(dx) * self.noise_amplitude,
            y0=self.y0 + float(dy) * self.noise_amplitude,
            vx=self.vx * speed,
            vy=self.vy * speed,
            gravity=self.gravity * speed,
            amplitude=self.amplitude * speed,
            growth=self.growth * speed,
        )

    def state(self, t: int) -> ObjectState:
        """Closed-form object position and extent at frame `t`."""
        half = self.size / 2
        if self.kind is SceneKind.PENDULUM:
            theta = self.amplitude * math.cos(2 * math.pi * t / self.period)
            return ObjectState(
                _fixed(self.x0 + self.length * math.sin(theta)),
                _fixed(self.y0 + self.length * math.cos(theta)),
                half,
            )
        if self.kind is SceneKind.DIFFUSING_BLOB:
            half += self.growth * t
        return ObjectState(
            self.x0 + self.vx * t,
            self.y0 + self.vy * t + 0.5 * self.gravity * t * t,
            half,
        )


def _fixed(value: float) -> float:
    # libm trig may differ in the last bit; the grid absorbs that
    return round(value * FIXED_POINT) / FIXED_POINT


def footprint(spec: SynthSpec, t: int) -> np.ndarray:
    """Pixels covered by the object at frame `t`, by pixel center."""
    cx, cy, half = spec.state(t)
    ys = np.arange(spec.height, dtype=np.float64)[:, np.newaxis] + 0.5
    xs = np.arange(spec.width, dtype=np.float64)[np.newaxis, :] + 0.5
    if spec.kind.square:
        return (
            (cx - half <= xs)
            & (xs < cx + half)
            & (cy - half <= ys)
            & (ys < cy + half)
        )
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= half * half


def check_bounds(spec: SynthSpec) -> None:
    for t in range(spec.num_frames):
        cx, cy, half = spec.state(t)
        if (
            cx - half < 0
            or cy - half < 0
            or cx + half > spec.width
            or cy + half > spec.height
        ):
            raise SceneError(
                f"{spec.kind} object leaves the {spec.width}x{spec.height}"
                f" frame at frame {t} (center {cx:.2f}, {cy:.2f})"
            )


def render_scenario(spec: SynthSpec, take: int = 1) -> FrameSequence:
    """Render one take of a synthetic scenario as RGB frames.

    Objects are hard-edged with uniform intensity on black. Take 1 follows
    the nominal trajectory; take 2 re-renders with seeded perturbations
    scaled by `noise_amplitude`.
    """
    spec = spec.perturbed(take)
    check_bounds(spec)
    frames = np.zeros(
        (spec.num_frames, spec.height, spec.width, 3), dtype=np.uint8
    )
    for t in range(spec.num_frames):
        frames[t][footprint(spec, t)] = spec.intensity
    return FrameSequence(frames, spec.fps)


def default_spec(kind: str | SceneKind, **overrides: object) -> SynthSpec:
    """Benchmark-ready spec: 8 s at 8 fps on a 64x64 frame."""
    return SynthSpec.with_preset(str(SceneKind(kind)), **overrides)
