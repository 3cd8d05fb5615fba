"""Command-line front end: ``containerlab <command> <action> [--param value ...]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__, caps
from .errors import InvalidConfig, LabError
from .harness import OPERATIONS, RunConfig, exit_status, render, run

log = logging.getLogger("containerlab")


def _common(parser):
    g = parser.add_argument_group("run options")
    g.add_argument("--seed", type=int, default=0, help="root seed (64-bit)")
    g.add_argument("--workers", type=int, default=1, help="worker processes")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--out", help="write the report here instead of standard output")
    g.add_argument("--cap", action="append", default=[], metavar="NAME=VALUE",
                   help="override a feasibility cap (repeatable)")
    g.add_argument("--save-config", metavar="PATH", help="also write the run configuration as JSON")
    g.add_argument("-v", "--verbose", action="store_true", help="progress messages on standard error")


def build_parser():
    parser = argparse.ArgumentParser(prog="containerlab", description="Desk-scale container-method laboratory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    replay = commands.add_parser("replay", help="rerun a saved configuration")
    replay.add_argument("config", help="JSON file written by --save-config")
    replay.add_argument("--out", help="write the report here instead of standard output")
    replay.add_argument("-v", "--verbose", action="store_true")

    grouped = {}
    for (cmd, action), (_, params) in OPERATIONS.items():
        grouped.setdefault(cmd, []).append((action, params))
    for cmd, actions in grouped.items():
        sub = commands.add_parser(cmd).add_subparsers(dest="action", required=True)
        for action, params in actions:
            ap = sub.add_parser(action)
            for p in params:
                ap.add_argument(f"--{p.name.replace('_', '-')}", dest=f"param_{p.name}", default=None,
                                help=p.help or f"default: {p.default}")
            _common(ap)
    return parser


def config_from_args(args):
    params = {k[len("param_"):]: v for k, v in vars(args).items() if k.startswith("param_") and v is not None}
    cap = {}
    for item in args.cap:
        cap.update(caps.parse_overrides(item))
    return RunConfig(args.command, args.action, params, args.seed, args.workers, args.format, args.out, cap)


def emit(report, fmt, out):
    text = render(report, fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "replay":
            with open(args.config) as fh:
                config = RunConfig.from_dict(json.load(fh))
            if args.out:
                config.out = args.out
        else:
            config = config_from_args(args)
            if args.save_config:
                with open(args.save_config, "w") as fh:
                    json.dump(config.to_dict(), fh, sort_keys=True, indent=2)
                    fh.write("\n")
        report = run(config)
    except (LabError, OSError, json.JSONDecodeError) as exc:
        print(f"containerlab: error: {exc}", file=sys.stderr)
        return 2
    emit(report, config.format, config.out)
    return exit_status(report)


if __name__ == "__main__":
    sys.exit(main())
