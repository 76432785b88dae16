"""Command-line entry point.

Subcommands:
  run <config.json>        execute an experiment described by a JSON file
  preset <name>            execute a named figure preset
  verify <suite>           run a self-check suite

Shared options: --seed, --replicas, --out override the corresponding
config fields.
"""

import argparse
import json
import sys
from dataclasses import replace

from .config import ConfigError, ExperimentSpec, load_config
from .experiment import run_experiment
from .presets import PRESETS, build_preset
from .sim import InvariantViolation
from .verify import SUITES, run_suite


def _parse_override(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"override must be key=value, got {text!r}")
    key, _, raw = text.partition("=")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare strings, e.g. utility=common
    return key, value


def _apply_common(spec: ExperimentSpec, args) -> ExperimentSpec:
    base = spec.base
    if args.seed is not None:
        base = replace(base, seed=args.seed)
    if args.replicas is not None:
        base = replace(base, replicas=args.replicas)
    out = args.out if args.out is not None else spec.output_dir
    return ExperimentSpec(base=base.validate(), sweep=spec.sweep,
                          output_dir=out, emit=spec.emit)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcnsim",
        description="Backscatter-network energy allocation and data "
                    "scheduling simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--replicas", type=int, default=None)
        p.add_argument("--out", type=str, default=None,
                       help="output directory")

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("config", help="path to the JSON configuration")
    add_common(p_run)

    p_preset = sub.add_parser("preset", help="run a named figure preset")
    p_preset.add_argument("name", choices=sorted(PRESETS))
    p_preset.add_argument("--override", action="append", type=_parse_override,
                          default=[], metavar="KEY=VALUE",
                          help="override a base-config field (repeatable)")
    add_common(p_preset)

    p_verify = sub.add_parser("verify", help="run a self-check suite")
    p_verify.add_argument("suite", choices=sorted(SUITES))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            spec = _apply_common(load_config(args.config), args)
            return run_experiment(spec)
        if args.command == "preset":
            spec = build_preset(args.name, dict(args.override))
            spec = _apply_common(spec, args)
            return run_experiment(spec)
        if args.command == "verify":
            results = run_suite(args.suite)
            failed = 0
            for res in results:
                status = "PASS" if res.passed else "FAIL"
                detail = f"  ({res.detail})" if res.detail else ""
                print(f"[{status}] {res.name}{detail}")
                failed += not res.passed
            return 1 if failed else 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 3
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
