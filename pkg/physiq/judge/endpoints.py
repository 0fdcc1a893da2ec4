from __future__ import annotations

import json
import logging
import os
import urllib.error
import urllib.request
import zlib
from abc import ABC, abstractmethod
from dataclasses import dataclass

import cv2
import numpy as np

from physiq.metrics import mean_squared_error

from .pairs import JudgeError, Position, VideoRef

logger = logging.getLogger(__name__)


class TransportError(JudgeError):
    pass


def answer(position: Position, reasoning: str = "") -> str:
    """A response in the format the prompt asks for."""
    return (
        f"{reasoning} For this reason, the {position} video is the"
        " generated one."
    ).strip()


class Judge(ABC):
    """A 2AFC judge: prompt plus two videos in, free text out."""

    name: str = "judge"

    @abstractmethod
    def ask(self, prompt: str, videos: tuple[VideoRef, VideoRef]) -> str: ...


@dataclass(frozen=True)
class JudgeEndpoint:
    url: str
    # Environment variable holding a bearer token, if the endpoint needs one
    token_env: str | None = "PHYSIQ_JUDGE_TOKEN"
    # Seconds to wait for one response
    timeout: float = 120.0
    # Tries per pair before the verdict is flagged as a transport failure
    attempts: int = 3
    # First retry delay in seconds, doubled on each further retry
    backoff: float = 1.0

    def __post_init__(self) -> None:
        if self.attempts < 1:
            raise ValueError(f"attempts must be >= 1: {self.attempts}")
        if self.timeout <= 0 or self.backoff < 0:
            raise ValueError(
                f"Invalid timeout/backoff: {self.timeout}, {self.backoff}"
            )


class HttpJudge(Judge):
    """Judge behind an HTTP endpoint speaking a small JSON contract.

    Requests are POSTed as `{"prompt": ..., "videos": [first, second]}`
    with each video given by reference; the endpoint answers
    `{"response": "<text>"}`.
    """

    name = "http"

    def __init__(self, endpoint: JudgeEndpoint) -> None:
        self.endpoint = endpoint

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        env = self.endpoint.token_env
        if env and (token := os.environ.get(env)):
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def ask(self, prompt: str, videos: tuple[VideoRef, VideoRef]) -> str:
        body = json.dumps(
            {"prompt": prompt, "videos": [v.to_dict() for v in videos]}
        ).encode()
        request = urllib.request.Request(  # noqa: S310
            self.endpoint.url,
            data=body,
            headers=self._headers(),
            method="POST",
        )
        try:
            with urllib.request.urlopen(  # noqa: S310
                request, timeout=self.endpoint.timeout
            ) as response:
                data = json.loads(response.read())
        except (urllib.error.URLError, TimeoutError, OSError) as e:
            raise TransportError(
                f"Judge endpoint {self.endpoint.url} failed: {e}"
            ) from e
        except json.JSONDecodeError as e:
            raise TransportError(f"Judge returned invalid JSON: {e}") from e
        text = data.get("response") if isinstance(data, dict) else None
        if not isinstance(text, str):
            raise TransportError("Judge response lacks a 'response' string")
        return text


class FixedJudge(Judge):
    """Always names the same position."""

    def __init__(self, position: Position) -> None:
        self.position = position
        self.name = f"always-{position}"

    def ask(self, prompt: str, videos: tuple[VideoRef, VideoRef]) -> str:
        return answer(self.position)


class RandomJudge(Judge):
    """Picks one of the two videos by coin flip.

    The flip is seeded from the judge seed and the two video references,
    so a pair gets the same video picked in either presentation order.
    """

    name = "random"

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed

    def ask(self, prompt: str, videos: tuple[VideoRef, VideoRef]) -> str:
        names = sorted(json.dumps(v.to_dict()) for v in videos)
        digest = zlib.crc32("\n".join(names).encode())
        rng = np.random.default_rng([self.seed, digest])
        picked = names[int(rng.integers(2))]
        first = json.dumps(videos[0].to_dict())
        return answer(Position.FIRST if picked == first else Position.SECOND)


def noise_energy(video: VideoRef) -> float:
    """Mean squared difference between a video and its blurred copy."""
    seq = video.load()
    blurred = np.stack(
        [
            cv2.GaussianBlur(f, (5, 5), 1.5, borderType=cv2.BORDER_REPLICATE)
            for f in seq
        ]
    ).reshape(seq.data.shape)
    return mean_squared_error(seq.data, blurred)


class NoiseEnergyJudge(Judge):
    """Flags the video with more high-frequency energy as generated."""

    name = "noise-energy"

    def ask(self, prompt: str, videos: tuple[VideoRef, VideoRef]) -> str:
        first, second = (noise_energy(v) for v in videos)
        position = Position.FIRST if first > second else Position.SECOND
        return answer(
            position,
            f"Noise energy {first:.6f} (first) vs {second:.6f} (second).",
        )


STUB_NAMES = ("always-first", "always-second", "random", "noise-energy")


def make_stub(name: str, seed: int = 0) -> Judge:
    match name:
        case "always-first":
            return FixedJudge(Position.FIRST)
        case "always-second":
            return FixedJudge(Position.SECOND)
        case "random":
            return RandomJudge(seed)
        case "noise-energy":
            return NoiseEnergyJudge()
    raise JudgeError(
        f"Unknown stub judge {name!r} (available: {', '.join(STUB_NAMES)})"
    )
