from __future__ import annotations

from dataclasses import dataclass

from physiq.presets import Preset, Presettable


class MaskError(ValueError):
    pass


@dataclass(frozen=True)
class MaskParams(Presettable):
    # Grayscale difference above which a pixel counts as moving (0-255)
    threshold: float = 25.0
    # Background running-average update rate, in (0, 1)
    update_rate: float = 0.05
    # Number of leading frames averaged into the initial background
    window: int = 5
    # Gaussian blur standard deviation (pixels)
    blur_sigma: float = 1.5
    # Blur kernel half-width; the kernel side is 2 * radius + 1
    blur_radius: int = 2
    # Side of the square structuring element for opening and closing
    morph_kernel: int = 3

    presets = (
        Preset("default"),
        Preset("sensitive", threshold=15.0),
        Preset("coarse", threshold=35.0, morph_kernel=5),
    )

    def __post_init__(self) -> None:
        if not 0 < self.threshold < 255:
            raise MaskError(f"threshold must be in (0, 255): {self.threshold}")
        if not 0 < self.update_rate < 1:
            raise MaskError(
                f"update_rate must be in (0, 1): {self.update_rate}"
            )
        if self.window < 1:
            raise MaskError(f"window must be >= 1: {self.window}")
        if self.blur_sigma <= 0 or self.blur_radius < 1:
            raise MaskError(
                f"blur sigma and radius must be positive:"
                f" {self.blur_sigma}, {self.blur_radius}"
            )
        if self.morph_kernel < 1:
            raise MaskError(f"morph_kernel must be >= 1: {self.morph_kernel}")
