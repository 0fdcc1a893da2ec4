import json
from pathlib import Path

import pytest

from physiq.bench import Perspective, ScenarioKey
from physiq.judge import (
    PROMPT,
    FixedJudge,
    Judge,
    JudgeError,
    Position,
    PresentationPair,
    TransportError,
    Verdict,
    VerdictStatus,
    VideoRef,
    build_pairs,
    mllm_score,
    parse_verdict,
    query_judge,
    run_judge,
    write_verdicts,
)

PAIR = PresentationPair(
    scenario_id="s01",
    perspective="center",
    first=VideoRef(Path("/gen/s01/center")),
    second=VideoRef(Path("/data/s01/center/take1"), 24, 64),
    generated_position=Position.FIRST,
    order_seed=0,
)


class ScriptedJudge(Judge):
    """Fails a set number of times, then gives a fixed response."""

    name = "scripted"

    def __init__(self, response: str, failures: int = 0) -> None:
        self.response = response
        self.failures = failures
        self.calls = 0

    def ask(self, prompt: str, videos: tuple[VideoRef, VideoRef]) -> str:
        assert prompt == PROMPT
        assert videos == PAIR.videos
        self.calls += 1
        if self.calls <= self.failures:
            msg = f"connection reset ({self.calls})"
            raise TransportError(msg)
        return self.response


def verdict(
    chosen: Position | None, status: VerdictStatus = VerdictStatus.OK
) -> Verdict:
    return Verdict("s", "center", Position.FIRST, chosen, "", status)


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        pytest.param(
            "For this reason, the first video is the generated one.",
            Position.FIRST,
            id="first",
        ),
        pytest.param(
            "...FOR THIS REASON, THE SECOND VIDEO IS THE GENERATED ONE",
            Position.SECOND,
            id="uppercase",
        ),
        pytest.param(
            "Maybe the first video is the generated one? On reflection,"
            " the second\nvideo is the generated one.",
            Position.SECOND,
            id="last-wins",
        ),
        pytest.param("I cannot tell them apart.", None, id="no-statement"),
        pytest.param(
            "the third video is the generated one", None, id="bad-position"
        ),
    ],
)
def test_parse_verdict(text: str, expected: Position | None) -> None:
    assert parse_verdict(text) is expected


def test_prompt_closing_statements() -> None:
    assert "the first video is the generated one" in PROMPT
    assert "the second video is the generated one" in PROMPT


def test_query_judge_correct() -> None:
    judge = ScriptedJudge("the first video is the generated one")
    result = query_judge(PAIR, judge)
    assert result.status is VerdictStatus.OK
    assert result.chosen_position is Position.FIRST
    assert result.correct
    assert judge.calls == 1


def test_query_judge_retries() -> None:
    judge = ScriptedJudge("the second video is the generated one", 2)
    sleeps: list[float] = []
    result = query_judge(PAIR, judge, backoff=0.5, sleep=sleeps.append)
    assert sleeps == [0.5, 1.0]
    assert judge.calls == 3
    assert result.status is VerdictStatus.OK
    assert result.chosen_position is Position.SECOND
    assert not result.correct


def test_query_judge_transport_failure() -> None:
    judge = ScriptedJudge("unused", 5)
    sleeps: list[float] = []
    result = query_judge(
        PAIR, judge, attempts=3, backoff=0.25, sleep=sleeps.append
    )
    assert judge.calls == 3
    assert sleeps == [0.25, 0.5]
    assert result.status is VerdictStatus.TRANSPORT_ERROR
    assert result.chosen_position is None
    assert result.raw_response == "connection reset (3)"
    assert not result.correct


def test_query_judge_unparseable() -> None:
    result = query_judge(PAIR, ScriptedJudge("Both look real to me."))
    assert result.status is VerdictStatus.UNPARSEABLE
    assert result.raw_response == "Both look real to me."
    assert not result.correct


def test_query_judge_needs_an_attempt() -> None:
    with pytest.raises(JudgeError, match="attempts must be"):
        query_judge(PAIR, ScriptedJudge("x"), attempts=0)


def test_run_judge_keeps_pair_order() -> None:
    refs = {
        ScenarioKey(f"s{i:02d}", Perspective.LEFT): VideoRef(
            Path(f"/v/{i}")
        )
        for i in range(20)
    }
    generated = {k: VideoRef(v.path / "gen") for k, v in refs.items()}
    pairs = build_pairs(refs, generated, seed=9)
    verdicts = run_judge(pairs, FixedJudge(Position.FIRST), max_in_flight=3)
    assert [v.scenario_id for v in verdicts] == [p.scenario_id for p in pairs]
    assert all(v.chosen_position is Position.FIRST for v in verdicts)
    expected = sum(p.generated_position is Position.FIRST for p in pairs)
    assert mllm_score(verdicts).correct == expected


def test_mllm_score() -> None:
    verdicts = [
        verdict(Position.FIRST),
        verdict(Position.FIRST),
        verdict(Position.SECOND),
        verdict(None, VerdictStatus.UNPARSEABLE),
        verdict(None, VerdictStatus.TRANSPORT_ERROR),
    ]
    score = mllm_score(verdicts)
    assert score.accuracy == pytest.approx(200 / 3)
    assert score.correct == 2
    assert score.parseable == 3
    assert score.unparseable == 1
    assert score.failed == 1
    assert score.total == 5
    assert score.parseable + score.unparseable + score.failed == score.total
    assert score.granularity == "scenario-perspective"


def test_mllm_score_without_parseable_verdicts() -> None:
    verdicts = [verdict(None, VerdictStatus.UNPARSEABLE)]
    with pytest.raises(JudgeError, match="No parseable verdicts"):
        mllm_score(verdicts)


def test_write_verdicts(temp_dir: Path) -> None:
    verdicts = [verdict(Position.FIRST), verdict(Position.SECOND)]
    path = temp_dir / "verdicts.json"
    score = write_verdicts(path, verdicts, seed=4, judge="always-first")
    assert score.accuracy == 50.0
    data = json.loads(path.read_text())
    assert data["judge"] == "always-first"
    assert data["seed"] == 4
    assert data["score"]["accuracy"] == 50.0
    assert data["verdicts"][1] == {
        "scenario_id": "s",
        "perspective": "center",
        "generated_position": "first",
        "chosen_position": "second",
        "correct": False,
        "status": "ok",
        "raw_response": "",
    }
