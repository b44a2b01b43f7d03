"""Command-line entry point.

    wcego <subcommand> [--config FILE] [--out DIR] [--seed N]
                       [--jobs N] [--format csv|json]

Config files are flat 'key = value' text; command-line flags override the
corresponding keys. Every run writes a manifest.json naming all outputs.
"""

import argparse
import os
import sys

from .config import Config, parse_config_file
from .errors import WcegoError
from .harness import COMMANDS
from .manifest import write_manifest


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wcego",
        description="Worst-case analysis of kernel-based global optimization")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    data = parse_config_file(args.config) if args.config else {}
    cfg = Config(data=data)
    cfg.override("seed", args.seed)
    cfg.override("jobs", args.jobs)
    cfg.override("format", args.format)
    os.makedirs(args.out, exist_ok=True)
    try:
        paths, timings = COMMANDS[args.command](cfg, args.out)
    except WcegoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    manifest_path = write_manifest(args.out, args.command, cfg.used,
                                   paths, timings)
    for p in paths + [manifest_path]:
        print(p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
