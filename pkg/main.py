"""MMDF designer entry point
   1. Parse subcommand + flags
   2. Resolve run config (defaults < config file < MMDF_OUTPUT_DIR < flags)
   3. Readiness checks
   4. Run the subcommand

Usage:
    python main.py design --filter lp --seed 1 --out out/lp
    python main.py evaluate --filter lp --stack "9:0.7118,8:3,2:0.9224,8:3,1:1.4457"
    python main.py sweep --axis thickness --layer 1 --frequency 10 --stack "1:1.0"
    python main.py validate

Exit codes: 0 success, 1 validation failure, 2 usage/config error
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from core.config import parse_bands, parse_float_list, resolve_run_config
from core.errors import ConfigError, DomainError, MMDFError
from core.logger import get_logger, set_level
from core.readiness import collect_run_readiness, first_failure, summarize_run_readiness
from tools.registry import registry

log = get_logger("mmdf")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="run config file (KEY=VALUE)")
    common.add_argument("--filter", choices=("lp", "hp", "bp"), help="built-in band layout")
    common.add_argument("--pass-bands", help="explicit pass bands, e.g. '8-12'")
    common.add_argument("--stop-bands", help="explicit stop bands, e.g. '2-8,12-18'")
    common.add_argument("--layers", type=int, help="number of layers n")
    common.add_argument("--angles", help="incidence angles in degrees, e.g. '0,15,30,45'")
    common.add_argument("--step", type=float, help="frequency step (GHz)")
    common.add_argument("--seed", type=int)
    common.add_argument("--np", type=int, help="colony size NP")
    common.add_argument("--ni", type=int, help="iterations NI")
    common.add_argument("--limit", type=int, help="scout abandonment limit")
    common.add_argument("--archive-cap", type=int, help="cap the Pareto archive size")
    common.add_argument("--workers", type=int, help="evaluation threads")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--materials", type=Path, help="material database file")
    common.add_argument("--stack", help="stack as 'id:thick,id:thick,...' (mm)")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    return common


def build_parser() -> argparse.ArgumentParser:
    registry.discover()
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Multilayer microwave dielectric filter designer",
        epilog=registry.get_help_text(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = _common_flags()
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for tool in registry.get_all():
        summary, description = tool.get_help()
        tool_parser = sub.add_parser(tool.name, parents=[common], help=summary,
                                     description=description)
        tool.add_arguments(tool_parser)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    """แปลง flag เป็น RunConfig field: None = ไม่ override"""
    return {
        "filter_kind": args.filter,
        "pass_bands": parse_bands(args.pass_bands) if args.pass_bands else None,
        "stop_bands": parse_bands(args.stop_bands) if args.stop_bands else None,
        "layers": args.layers,
        "angles": parse_float_list(args.angles) if args.angles else None,
        "freq_step": args.step,
        "seed": args.seed,
        "colony_size": args.np,
        "iterations": args.ni,
        "limit": args.limit,
        "archive_cap": args.archive_cap,
        "workers": args.workers,
        "output_dir": args.out,
        "materials_file": args.materials,
        "stack": args.stack,
    }


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse: --help → 0, usage error → 2
        return int(e.code or 0)

    if args.log_level:
        try:
            set_level(args.log_level)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE

    tool = registry.get_tool(args.command)
    try:
        cfg = resolve_run_config(args.config, **_overrides(args))
        report = collect_run_readiness(cfg, args.command)
        for line in summarize_run_readiness(report):
            log.debug(line)
        if report["should_fail_fast"]:
            failed = first_failure(report)
            print(f"error: {failed['summary']}: {failed['detail']}", file=sys.stderr)
            return EXIT_USAGE
        result = tool.execute(cfg, args)
    except (ConfigError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MMDFError, OSError) as e:
        log.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    print(result.text)
    if result.files:
        log.info("%s wrote %s", args.command, ", ".join(p.name for p in result.files))
    if not result.ok:
        log.warning("%s finished with exit code %d", args.command, result.exit_code)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
