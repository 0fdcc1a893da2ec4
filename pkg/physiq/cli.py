"""Command-line entry point: `physiq <command> ...`."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

from physiq import version
from physiq.bench import (
    MODEL_FORMATS,
    ReportError,
    VarianceBaseline,
    category_breakdown,
    compute_variance_baseline,
    evaluate_model,
    load_manifest,
    load_report,
    reference_summary,
    summary_rows,
    validate_manifest,
    write_conditioning,
    write_report,
    write_summary,
)
from physiq.bench.constants import MANIFEST_FILE
from physiq.config import EvalConfig
from physiq.frameseq import (
    SequenceError,
    SplitSpec,
    load_sequence,
    read_meta,
    resample_fps,
    save_sequence,
    split_at_switch,
)
from physiq.judge import (
    STUB_NAMES,
    HttpJudge,
    JudgeEndpoint,
    JudgeError,
    make_stub,
    manifest_pairs,
    run_judge,
    write_verdicts,
)
from physiq.metrics import evaluate_pair
from physiq.motionmask import MaskParams, compute_mask_video, save_mask_video
from physiq.synthlab import (
    SceneError,
    SceneKind,
    default_spec,
    render_scenario,
    write_mini_benchmark,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from physiq.bench import EvalReport

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _size(text: str) -> tuple[int, int]:
    try:
        width, height = (int(v) for v in text.lower().split("x"))
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"Expected WIDTHxHEIGHT, got {text!r}"
        ) from e
    return width, height


def _eval_config(args: argparse.Namespace) -> EvalConfig:
    config = EvalConfig()
    if args.params:
        config = EvalConfig.from_file(args.params)
    if args.workers is not None:
        config = EvalConfig(
            config.mask,
            config.spatiotemporal_mode,
            args.workers,
            config.compare_seconds,
        )
    return config


def _is_manifest(path: Path) -> bool:
    return path.suffix == ".json" or (path / MANIFEST_FILE).is_file()


def cmd_ingest(args: argparse.Namespace) -> int:
    fps, size = args.fps, args.size
    if args.model:
        fmt = MODEL_FORMATS[args.model]
        fps = fps or fmt.fps
        size = size or fmt.size
    if not fps:
        raise SequenceError("ingest needs --fps or --model")
    seq = load_sequence(args.input)
    extra = {}
    meta = read_meta(args.input)
    if "scenario_id" in meta:
        extra["scenario_id"] = meta["scenario_id"]
    if "switch_index" in meta:
        # Keep the switch frame at the same instant
        switch_time = (int(meta["switch_index"]) + 1) / seq.fps
        extra["switch_index"] = max(0, round(switch_time * fps) - 1)
    out = resample_fps(seq, fps, size)
    save_sequence(out, args.output, extra)
    logger.info(
        f"Ingested {seq.num_frames} frames @ {seq.fps:g} fps into"
        f" {out.num_frames} frames @ {out.fps:g} fps"
        f" ({out.width}x{out.height})"
    )
    return 0


def cmd_condition(args: argparse.Namespace) -> int:
    fmt = MODEL_FORMATS[args.model]
    paths = write_conditioning(load_manifest(args.real), args.out, fmt)
    print(
        f"Wrote {len(paths)} {fmt.conditioning} conditioning inputs"
        f" for {fmt.name} to {args.out}"
    )
    return 0


def cmd_mask(args: argparse.Namespace) -> int:
    overrides = {
        k: v
        for k, v in (
            ("threshold", args.tau),
            ("update_rate", args.alpha),
            ("window", args.window),
        )
        if v is not None
    }
    params = MaskParams.with_preset(args.preset, **overrides)
    mask = compute_mask_video(load_sequence(args.input), params)
    save_mask_video(mask, args.output, {"mask_params": params.to_dict()})
    return 0


def _evaluate_single(args: argparse.Namespace, config: EvalConfig) -> int:
    real = load_sequence(args.real)
    meta = read_meta(args.real)
    if "switch_index" in meta:
        # A full recording: score against the continuation only
        split = SplitSpec(int(meta["switch_index"]))
        real = split_at_switch(real, split)[1]
    result = evaluate_pair(
        real,
        load_sequence(args.generated),
        config.mask,
        config.spatiotemporal_mode,
        config.compare_seconds,
    )
    records = [
        {
            "scenario_id": meta.get("scenario_id"),
            "perspective": meta.get("perspective"),
            **value.to_record(),
            "mask_params": config.mask.to_dict(),
        }
        for value in result.values()
    ]
    Path(args.out).write_text(
        json.dumps(records, indent=2) + "\n", encoding="utf-8"
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _eval_config(args)
    if not _is_manifest(args.real):
        return _evaluate_single(args, config)
    records = load_manifest(args.real)
    baseline = None
    if args.baseline:
        baseline = VarianceBaseline.load(args.baseline)
    report = evaluate_model(
        records, args.generated, config, args.model, baseline
    )
    write_report(report, args.out, args.format)
    print(f"{report.model}: Physics-IQ {report.physics_iq:.1f}")
    return 0


def cmd_variance(args: argparse.Namespace) -> int:
    baseline = compute_variance_baseline(
        load_manifest(args.real),
        _eval_config(args),
        allow_missing=args.allow_missing,
    )
    baseline.save(args.out)
    for metric, value in baseline.aggregate.items():
        print(f"{metric}: {value:.6f}")
    return 0


def _breakdown(report: EvalReport) -> dict[str, Any]:
    table: dict[str, Any] = {}
    for category, row in category_breakdown(report).items():
        if row is None:
            table[str(category)] = None
            continue
        table[str(category)] = {
            "count": row.count,
            "values": {str(m): v for m, v in row.values.items()},
            "baseline": {str(m): v for m, v in row.baseline.items()},
            "normalized": {str(m): v for m, v in row.normalized.items()},
            "physics_iq": row.physics_iq,
        }
    return table


def cmd_report(args: argparse.Namespace) -> int:
    if args.reference:
        rows, correlation = reference_summary()
    else:
        if not args.models:
            raise ReportError("report needs --models or --reference")
        reports = [load_report(p) for p in args.models]
        rows, correlation = summary_rows(reports)
        if args.breakdown:
            table = {r.model: _breakdown(r) for r in reports}
            Path(args.breakdown).write_text(
                json.dumps(table, indent=2) + "\n", encoding="utf-8"
            )
    write_summary(rows, correlation, args.out, args.format)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    records = load_manifest(args.manifest)
    problems = validate_manifest(records, partial=args.partial)
    for problem in problems:
        print(problem, file=sys.stderr)
    if problems:
        return 1
    print(f"OK: {len(records)} records")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    if args.benchmark:
        records = write_mini_benchmark(
            args.out, args.seed, noise_amplitude=args.noise_amplitude
        )
        print(f"Wrote {len(records)} recordings to {args.out}")
        return 0
    if not args.kind:
        raise SceneError("synth needs --kind or --benchmark")
    spec = default_spec(
        args.kind, noise_seed=args.seed, noise_amplitude=args.noise_amplitude
    )
    save_sequence(
        render_scenario(spec, args.take),
        args.out,
        {"scenario_id": f"synth-{spec.kind}", "take": args.take},
    )
    return 0


def cmd_judge(args: argparse.Namespace) -> int:
    if args.stub:
        judge = make_stub(args.stub, args.seed)
        attempts, backoff = 1, 0.0
    else:
        endpoint = JudgeEndpoint(
            args.endpoint, token_env=args.token_env, timeout=args.timeout
        )
        judge = HttpJudge(endpoint)
        attempts, backoff = endpoint.attempts, endpoint.backoff
    pairs = manifest_pairs(
        load_manifest(args.real), args.generated, args.seed
    )
    verdicts = run_judge(
        pairs,
        judge,
        max_in_flight=args.max_in_flight,
        attempts=attempts,
        backoff=backoff,
    )
    score = write_verdicts(
        args.out, verdicts, seed=args.seed, judge=judge.name
    )
    print(
        f"MLLM score {score.accuracy:.1f}% ({score.parseable} parseable,"
        f" {score.unparseable} unparseable, {score.failed} failed)"
    )
    return 0


def _add_eval_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--params", type=Path, help="TOML or JSON evaluation config"
    )
    parser.add_argument("--workers", type=int, help="Concurrent evaluations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="physiq",
        description="Physical-plausibility evaluation for generated video",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {version}"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="Resample a frame sequence")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--fps", type=float)
    p.add_argument("--size", type=_size, help="WIDTHxHEIGHT")
    p.add_argument("--model", choices=sorted(MODEL_FORMATS))
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser(
        "condition", help="Export what a model is conditioned on"
    )
    p.add_argument("--real", type=Path, required=True)
    p.add_argument("--model", choices=sorted(MODEL_FORMATS), required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("mask", help="Compute a motion-mask video")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--preset", choices=MaskParams.preset_names())
    p.add_argument("--tau", type=float, help="Difference threshold")
    p.add_argument("--alpha", type=float, help="Background update rate")
    p.add_argument("--window", type=int, help="Initial background frames")
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("evaluate", help="Score generated videos")
    p.add_argument(
        "--real",
        type=Path,
        required=True,
        help="Dataset manifest, or one real frame sequence",
    )
    p.add_argument("--generated", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--model", default="model", help="Model label")
    p.add_argument("--baseline", type=Path, help="Precomputed variance")
    p.add_argument("--format", choices=("json", "csv"))
    _add_eval_options(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("variance", help="Compute physical variance")
    p.add_argument("--real", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--allow-missing", action="store_true")
    _add_eval_options(p)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("report", help="Summarize model reports")
    p.add_argument("--models", type=Path, nargs="+")
    p.add_argument(
        "--reference", action="store_true", help="Use published results"
    )
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--breakdown", type=Path, help="Per-category JSON")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("validate", help="Check a dataset manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--partial", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="Render synthetic scenarios")
    p.add_argument("--kind", choices=[str(k) for k in SceneKind])
    p.add_argument("--benchmark", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--take", type=int, choices=(1, 2), default=1)
    p.add_argument("--noise-amplitude", type=float, default=1.0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("judge", help="Run the 2AFC realism judge")
    p.add_argument("--real", type=Path, required=True)
    p.add_argument("--generated", type=Path, required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--endpoint", help="Judge endpoint URL")
    source.add_argument("--stub", choices=STUB_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--max-in-flight", type=int, default=4)
    p.add_argument("--token-env", default="PHYSIQ_JUDGE_TOKEN")
    p.add_argument("--timeout", type=float, default=120.0)
    p.set_defaults(func=cmd_judge)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format=LOG_FORMAT, stream=sys.stderr, force=True
    )
    try:
        return args.func(args)
    except (ValueError, JudgeError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1

