"""validate: รัน oracle suites แล้วรายงาน pass/fail พร้อม deviation สูงสุด"""

from __future__ import annotations

import argparse

from core.config import RunConfig
from core.logger import get_logger
from core.reference import SUITE_NAMES, SuiteResult, run_oracle_suites
from core.run_setup import load_materials
from tools.base import BaseTool
from tools.response import CommandResult

log = get_logger(__name__)


def format_report(results: list[SuiteResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.name:<17} max deviation {r.max_deviation:.3e} "
                     f"(tol {r.tolerance:.0e}, {r.cases} cases) {r.detail}".rstrip())
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - failed}/{len(results)} suites passed")
    return "\n".join(lines)


class ValidateTool(BaseTool):
    name = "validate"
    description = "Cross-check the reflection model and Pareto archive against independent oracles"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--suite", action="append", choices=SUITE_NAMES,
                            help="run only this suite (repeatable)")
        parser.add_argument("--stacks", type=int, default=1000, help="random stacks per suite")
        parser.add_argument("--pareto-sets", type=int, default=200)
        parser.add_argument("--pareto-points", type=int, default=1000)

    def execute(self, cfg: RunConfig, args: argparse.Namespace) -> CommandResult:
        db = load_materials(cfg)
        results = run_oracle_suites(
            db,
            seed=cfg.seed,
            n_stacks=args.stacks,
            n_pareto_sets=args.pareto_sets,
            n_pareto_points=args.pareto_points,
            suites=args.suite,
        )
        passed = all(r.passed for r in results)
        return CommandResult(text=format_report(results), exit_code=0 if passed else 1)
