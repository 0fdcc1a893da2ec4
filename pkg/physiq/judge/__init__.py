from .endpoints import (
    STUB_NAMES,
    FixedJudge,
    HttpJudge,
    Judge,
    JudgeEndpoint,
    NoiseEnergyJudge,
    RandomJudge,
    TransportError,
    make_stub,
    noise_energy,
)
from .pairs import (
    JudgeError,
    Position,
    PresentationPair,
    VideoRef,
    build_pairs,
    manifest_pairs,
)
from .protocol import (
    PROMPT,
    MllmScore,
    Verdict,
    VerdictStatus,
    mllm_score,
    parse_verdict,
    query_judge,
    run_judge,
    write_verdicts,
)

__all__ = [
    "PROMPT",
    "STUB_NAMES",
    "FixedJudge",
    "HttpJudge",
    "Judge",
    "JudgeEndpoint",
    "JudgeError",
    "MllmScore",
    "NoiseEnergyJudge",
    "Position",
    "PresentationPair",
    "RandomJudge",
    "TransportError",
    "Verdict",
    "VerdictStatus",
    "VideoRef",
    "build_pairs",
    "make_stub",
    "manifest_pairs",
    "mllm_score",
    "noise_energy",
    "parse_verdict",
    "query_judge",
    "run_judge",
    "write_verdicts",
]
