from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import StrEnum
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .endpoints import Judge, TransportError
from .pairs import JudgeError, Position, PresentationPair

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

logger = logging.getLogger(__name__)

PROMPT = (
    "Your task is to help me sort my videos. I mixed up real videos that I"
    " shot with my camera and similar videos that I generated with a"
    " computer. I only know that exactly one of the two videos is the real"
    " one, and exactly one of the following two videos is the generated"
    " one. Please take a look at the two videos and let me know which of"
    " them is the generated one. I'll tip you $100 if you do a great job and"
    " help me identify the generated one. First explain your reasoning, then"
    " end with the following statement: 'For this reason, the first video is"
    " the generated one' or 'For this reason, the second video is the"
    " generated one'."
)

_VERDICT_RE = re.compile(
    r"the\s+(first|second)\s+video\s+is\s+the\s+generated\s+one",
    re.IGNORECASE,
)

# One pair per (scenario, perspective) in the manifest
GRANULARITY = "scenario-perspective"


def parse_verdict(text: str) -> Position | None:
    """Position named by the last closing statement, if any."""
    matches = _VERDICT_RE.findall(text)
    if not matches:
        return None
    return Position(matches[-1].lower())


class VerdictStatus(StrEnum):
    OK = "ok"
    UNPARSEABLE = "unparseable"
    TRANSPORT_ERROR = "transport-error"


@dataclass(frozen=True)
class Verdict:
    scenario_id: str
    perspective: str
    generated_position: Position
    chosen_position: Position | None
    raw_response: str
    status: VerdictStatus = VerdictStatus.OK

    @property
    def correct(self) -> bool:
        return (
            self.status is VerdictStatus.OK
            and self.chosen_position is self.generated_position
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario_id": self.scenario_id,
            "perspective": self.perspective,
            "generated_position": str(self.generated_position),
            "chosen_position": (
                None
                if self.chosen_position is None
                else str(self.chosen_position)
            ),
            "correct": self.correct,
            "status": str(self.status),
            "raw_response": self.raw_response,
        }


def query_judge(
    pair: PresentationPair,
    judge: Judge,
    *,
    attempts: int = 3,
    backoff: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> Verdict:
    """Ask the judge to spot the generated video of one pair.

    Transport failures are retried with exponential backoff; after the last
    attempt the verdict is flagged rather than raised.
    """
    for attempt in range(1, attempts + 1):
        try:
            text = judge.ask(PROMPT, pair.videos)
        except TransportError as e:
            logger.warning(
                f"{pair.scenario_id} {pair.perspective}: attempt"
                f" {attempt}/{attempts} failed: {e}"
            )
            if attempt == attempts:
                return Verdict(
                    pair.scenario_id,
                    pair.perspective,
                    pair.generated_position,
                    None,
                    str(e),
                    VerdictStatus.TRANSPORT_ERROR,
                )
            sleep(backoff * 2 ** (attempt - 1))
            continue
        chosen = parse_verdict(text)
        return Verdict(
            pair.scenario_id,
            pair.perspective,
            pair.generated_position,
            chosen,
            text,
            (
                VerdictStatus.OK
                if chosen is not None
                else VerdictStatus.UNPARSEABLE
            ),
        )
    raise JudgeError(f"attempts must be >= 1: {attempts}")


def run_judge(
    pairs: Sequence[PresentationPair],
    judge: Judge,
    *,
    max_in_flight: int = 4,
    attempts: int = 3,
    backoff: float = 1.0,
) -> list[Verdict]:
    """Query every pair, at most `max_in_flight` at a time, in pair order."""
    logger.info(f"Querying {judge.name} on {len(pairs)} pairs")
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(
            pool.map(
                lambda p: query_judge(
                    p, judge, attempts=attempts, backoff=backoff
                ),
                pairs,
            )
        )


@dataclass(frozen=True)
class MllmScore:
    # Percentage of parseable verdicts naming the generated video
    accuracy: float
    correct: int
    parseable: int
    unparseable: int
    # Verdicts lost to transport failures
    failed: int
    total: int
    granularity: str = GRANULARITY

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def mllm_score(
    verdicts: Iterable[Verdict], granularity: str = GRANULARITY
) -> MllmScore:
    """2AFC identification accuracy; 50 is chance, lower looks more real."""
    verdicts = list(verdicts)
    parseable = [v for v in verdicts if v.status is VerdictStatus.OK]
    if not parseable:
        raise JudgeError(
            f"No parseable verdicts among {len(verdicts)} responses"
        )
    correct = sum(v.correct for v in parseable)
    return MllmScore(
        accuracy=100.0 * correct / len(parseable),
        correct=correct,
        parseable=len(parseable),
        unparseable=sum(
            v.status is VerdictStatus.UNPARSEABLE for v in verdicts
        ),
        failed=sum(
            v.status is VerdictStatus.TRANSPORT_ERROR for v in verdicts
        ),
        total=len(verdicts),
        granularity=granularity,
    )


def write_verdicts(
    path: str | Path,
    verdicts: Sequence[Verdict],
    *,
    seed: int,
    judge: str,
) -> MllmScore:
    score = mllm_score(verdicts)
    payload = {
        "judge": judge,
        "seed": seed,
        "granularity": score.granularity,
        "score": score.to_dict(),
        "verdicts": [v.to_dict() for v in verdicts],
    }
    Path(path).write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8"
    )
    return score
