import argparse
import json
import logging
import os
import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Add src directory to path
sys.path.insert(0, os.path.dirname(__file__))

from src.cli import dispatch
from src.config import load_settings


def build_parser() -> argparse.ArgumentParser:
    settings = load_settings()
    parser = argparse.ArgumentParser(
        prog="princrep",
        description="Minimal representations of finite distributive lattices by principal congruences",
    )
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG")
    parser.add_argument("--quiet", action="store_true", help="log errors only")
    parser.add_argument("--seed-free", action="store_true", help="accepted for scripts; nothing is random")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synthesize", help="build a certified minimal representation")
    synth.add_argument("--input", required=True, help="poset (relations) or distributive lattice (covers) JSON")
    synth.add_argument("--output")
    synth.add_argument("--format", choices=["json", "dot", "text"], default="json")
    synth.add_argument("--trace", nargs="?", const=settings.trace_dir, default=None,
                       help="write one DOT diagram per construction step")

    verify = sub.add_parser("verify", help="check Princ L = Min L and Con L against D")
    verify.add_argument("--input", required=True)
    verify.add_argument("--against", required=True)

    enum = sub.add_parser("enumerate", help="classify all lattices up to a size")
    enum.add_argument("--max-n", type=int, default=settings.max_n)
    enum.add_argument("--jobs", type=int, default=settings.jobs)
    enum.add_argument("--minimal-only", action="store_true")
    enum.add_argument("--represents")
    enum.add_argument("--size", type=int)

    export = sub.add_parser("export", help="re-emit a lattice as DOT or JSON")
    export.add_argument("--input", required=True)
    export.add_argument("--format", default="dot")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    settings = load_settings()
    level = "DEBUG" if args.verbose else "ERROR" if args.quiet else settings.log_level
    logging.basicConfig(level=level, format=settings.log_format)

    options = {k: v for k, v in vars(args).items() if k not in ("command", "verbose", "quiet", "seed_free")}
    result = dispatch(args.command, **options)

    payload = result["payload"]
    if isinstance(payload, str):
        print(payload)
    elif payload is not None and not (args.command == "synthesize" and options.get("output")):
        print(json.dumps(payload, indent=2))
    print(result["message"], file=sys.stderr)
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
