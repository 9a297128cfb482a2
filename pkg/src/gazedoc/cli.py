"""Command-line entry point.

Subcommands: scenario, gen-trace, run, replay, metrics, compare, serve.
Exit codes: 0 success, 1 run/diff failure, 2 usage or input error.
Config overrides (--set key=value) take precedence over scenario-embedded
config.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import parse_override
from .engine import read_event_log, write_event_log
from .pipeline import read_trace, write_trace
from .reader import ReaderModel, TraceGenerationError, generate_trace
from .scenario import TASK_TEMPLATES, build_task_scenario, load_scenario, save_scenario
from .simulate import compare_modes, diff_event_logs, run

USAGE_ERROR = 2
RUN_ERROR = 1


def _add_overrides(parser):
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="engine config override (repeatable)",
    )


def _parse_overrides(pairs):
    out = {}
    for text in pairs:
        key, value = parse_override(text)
        out[key] = value
    return out


def _load_scenario_with_overrides(args):
    scenario = load_scenario(args.scenario)
    overrides = _parse_overrides(args.overrides)
    if getattr(args, "mode", None):
        overrides["mode"] = args.mode
    if overrides:
        scenario.config = scenario.config.with_overrides(overrides)
    return scenario


def _reader_from_args(args, scenario) -> ReaderModel:
    return ReaderModel(
        wpm=args.wpm,
        fixations_per_line=args.fixations_per_line,
        noise_std_deg=args.noise_deg,
        jitter_std_deg=args.jitter_deg,
        seed=args.seed if args.seed is not None else scenario.seed,
        max_duration_s=args.max_duration,
    )


def _add_reader_args(parser):
    parser.add_argument("--wpm", type=float, default=200.0, help="reading speed (words/minute)")
    parser.add_argument("--fixations-per-line", type=int, default=3)
    parser.add_argument("--noise-deg", type=float, default=0.0, help="per-fixation accuracy noise std (0 or 0.5..1.1)")
    parser.add_argument("--jitter-deg", type=float, default=0.0, help="per-sample jitter std")
    parser.add_argument("--seed", type=int, default=None, help="reader seed (default: scenario seed)")
    parser.add_argument("--max-duration", type=float, default=1800.0, help="abort generation past this many simulated seconds")


def cmd_scenario(args) -> int:
    scenario = build_task_scenario(args.task, args.seed, _parse_overrides(args.overrides))
    if args.mode:
        scenario.config = scenario.config.with_overrides({"mode": args.mode})
    save_scenario(args.output, scenario)
    print(f"wrote scenario {scenario.name!r} ({len(scenario.documents)} documents) to {args.output}")
    return 0


def cmd_gen_trace(args) -> int:
    scenario = _load_scenario_with_overrides(args)
    reader = _reader_from_args(args, scenario)
    samples = generate_trace(scenario, reader, scenario.config.mode)
    write_trace(args.output, samples)
    print(f"wrote {len(samples)} samples ({samples[-1].t:.1f} s at {scenario.config.sample_rate_hz:g} Hz) to {args.output}")
    return 0


def cmd_run(args) -> int:
    scenario = _load_scenario_with_overrides(args)
    samples = read_trace(args.trace)
    events, report = run(scenario, samples)
    if args.output:
        write_event_log(args.output, events)
    if args.metrics:
        with open(args.metrics, "w", encoding="utf-8") as f:
            f.write(report.to_json() + "\n")
    print(f"{len(events)} events, reading_time={report.reading_time_s:.2f}s")
    return 0


def cmd_replay(args) -> int:
    scenario = _load_scenario_with_overrides(args)
    samples = read_trace(args.trace)
    events, _ = run(scenario, samples)
    got = [e.to_record() for e in events]
    want = read_event_log(args.events)
    divergence = diff_event_logs(want, got)
    if divergence is None:
        print(f"replay matches {args.events} ({len(got)} events)")
        return 0
    print(f"replay diverged: {divergence}", file=sys.stderr)
    return RUN_ERROR


def cmd_metrics(args) -> int:
    scenario = _load_scenario_with_overrides(args)
    samples = read_trace(args.trace)
    _, report = run(scenario, samples)
    out = report.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(out + "\n")
    else:
        print(out)
    return 0


def cmd_compare(args) -> int:
    scenario = _load_scenario_with_overrides(args)
    reader = _reader_from_args(args, scenario)
    reports = compare_modes(scenario, reader)
    payload = json.dumps([r.to_dict() for r in reports], indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(payload + "\n")
    else:
        print(payload)
    return 0


def cmd_serve(args) -> int:
    from .service import serve  # imported lazily: pulls in asyncio/http machinery

    serve(port=args.port, http_port=args.http_port, demo=args.demo)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazedoc",
        description="Deterministic gaze-interaction engine for reading document panels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scenario", help="write a task scenario file")
    p.add_argument("--task", required=True, choices=sorted(TASK_TEMPLATES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["gaze", "baseline"], default=None)
    p.add_argument("-o", "--output", required=True)
    _add_overrides(p)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("gen-trace", help="generate a synthetic reader trace")
    p.add_argument("-s", "--scenario", required=True)
    p.add_argument("--mode", choices=["gaze", "baseline"], default=None)
    p.add_argument("-o", "--output", required=True)
    _add_reader_args(p)
    _add_overrides(p)
    p.set_defaults(func=cmd_gen_trace)

    p = sub.add_parser("run", help="run a trace, writing events and metrics")
    p.add_argument("-s", "--scenario", required=True)
    p.add_argument("-t", "--trace", required=True)
    p.add_argument("--mode", choices=["gaze", "baseline"], default=None)
    p.add_argument("-o", "--output", default=None, help="event log output (jsonl)")
    p.add_argument("--metrics", default=None, help="metrics output (json)")
    _add_overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="re-run a trace and diff against an event log")
    p.add_argument("-s", "--scenario", required=True)
    p.add_argument("-t", "--trace", required=True)
    p.add_argument("-e", "--events", required=True, help="event log to diff against")
    p.add_argument("--mode", choices=["gaze", "baseline"], default=None)
    _add_overrides(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("metrics", help="compute metrics for a scenario + trace")
    p.add_argument("-s", "--scenario", required=True)
    p.add_argument("-t", "--trace", required=True)
    p.add_argument("--mode", choices=["gaze", "baseline"], default=None)
    p.add_argument("-o", "--output", default=None)
    _add_overrides(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("compare", help="paired gaze/baseline metrics for one scenario")
    p.add_argument("-s", "--scenario", required=True)
    p.add_argument("-o", "--output", default=None)
    _add_reader_args(p)
    _add_overrides(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="start the session service")
    p.add_argument("--port", type=int, default=7466, help="TCP port (0 = ephemeral)")
    p.add_argument("--http-port", type=int, default=None, help="HTTP bridge port for the browser demo")
    p.add_argument("--demo", action="store_true", help="serve the browser demo over the HTTP bridge")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except TraceGenerationError as exc:
        print(f"trace generation failed: {exc}", file=sys.stderr)
        return RUN_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
