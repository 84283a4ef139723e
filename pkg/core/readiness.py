"""Pre-run readiness checks: รันก่อนทุก subcommand"""

from __future__ import annotations

import os
from pathlib import Path

from core import run_setup
from core.config import RunConfig
from core.errors import MMDFError
from core.logger import get_logger
from core.template_loader import validate_all_templates

log = get_logger(__name__)

STATUS_OK = "ok"
STATUS_WARN = "warn"
STATUS_FAIL = "fail"

# subcommand ที่ต้องมี stack / เขียนไฟล์ output
_NEEDS_STACK = {"evaluate", "sweep"}
_WRITES_OUTPUT = {"design", "evaluate", "sweep"}


def _make_check(name: str, status: str, summary: str, *, required: bool = False,
                detail: str = "") -> dict:
    return {
        "name": name,
        "status": status,
        "required": required,
        "summary": summary,
        "detail": detail,
    }


def output_dir_is_writable(path: Path) -> bool:
    """path หรือ ancestor แรกที่มีอยู่ต้องเขียนได้"""
    probe = Path(path).resolve()
    while not probe.exists():
        if probe.parent == probe:
            return False
        probe = probe.parent
    return probe.is_dir() and os.access(probe, os.W_OK)


def collect_run_readiness(cfg: RunConfig, command: str) -> dict:
    checks: list[dict] = []

    if command in _WRITES_OUTPUT:
        writable = output_dir_is_writable(cfg.output_dir)
        checks.append(_make_check(
            "output_dir",
            STATUS_OK if writable else STATUS_FAIL,
            "output directory writable" if writable else "output directory not writable",
            required=True,
            detail=str(cfg.output_dir),
        ))

    db = None
    try:
        db = run_setup.load_materials(cfg)
        source = str(cfg.materials_file) if cfg.materials_file else "built-in table"
        checks.append(_make_check("materials", STATUS_OK, f"{len(db)} materials loaded",
                                  required=True, detail=source))
    except MMDFError as e:
        checks.append(_make_check("materials", STATUS_FAIL, "material database unusable",
                                  required=True, detail=str(e)))

    try:
        spec = run_setup.build_filter_spec(cfg)
        checks.append(_make_check("filter", STATUS_OK, f"{spec.kind.value} filter",
                                  required=True,
                                  detail=f"pass {list(spec.pass_bands)} stop {list(spec.stop_bands)}"))
    except MMDFError as e:
        checks.append(_make_check("filter", STATUS_FAIL, "invalid band layout",
                                  required=True, detail=str(e)))

    if command == "design":
        try:
            abc = run_setup.build_abc_config(cfg)
            checks.append(_make_check("optimizer", STATUS_OK,
                                      f"NP={abc.colony_size} NI={abc.iterations} limit={abc.limit}",
                                      required=True))
            if db is not None:
                run_setup.build_problem(cfg, db)
        except MMDFError as e:
            checks.append(_make_check("optimizer", STATUS_FAIL, "invalid optimizer settings",
                                      required=True, detail=str(e)))

    if command in _NEEDS_STACK and db is not None:
        try:
            stack = run_setup.resolve_stack(cfg, db)
            checks.append(_make_check("stack", STATUS_OK, f"{len(stack)} layers",
                                      required=True, detail=f"TT {stack.total_thickness:.4f} mm"))
        except MMDFError as e:
            checks.append(_make_check("stack", STATUS_FAIL, "stack unresolvable",
                                      required=True, detail=str(e)))

    cpus = os.cpu_count() or 1
    if cfg.workers > cpus:
        checks.append(_make_check("workers", STATUS_WARN,
                                  f"{cfg.workers} workers on {cpus} CPUs",
                                  detail="extra threads only add scheduling overhead"))

    template_errors = validate_all_templates()
    checks.append(_make_check(
        "templates",
        STATUS_WARN if template_errors else STATUS_OK,
        f"{len(template_errors)} broken template(s)" if template_errors else "templates render",
        detail="; ".join(template_errors),
    ))

    overall = STATUS_OK
    if any(c["status"] == STATUS_FAIL for c in checks):
        overall = STATUS_FAIL
    elif any(c["status"] == STATUS_WARN for c in checks):
        overall = "degraded"

    return {
        "command": command,
        "status": overall,
        "should_fail_fast": overall == STATUS_FAIL,
        "checks": checks,
    }


def summarize_run_readiness(report: dict) -> list[str]:
    lines: list[str] = []
    for check in report.get("checks", []):
        prefix = {
            STATUS_OK: "OK",
            STATUS_WARN: "WARN",
            STATUS_FAIL: "FAIL",
        }.get(check["status"], check["status"].upper())
        line = f"[{prefix}] {check['name']}: {check['summary']}"
        if check.get("detail"):
            line += f" - {check['detail']}"
        lines.append(line)
    return lines


def first_failure(report: dict) -> dict | None:
    for check in report.get("checks", []):
        if check["status"] == STATUS_FAIL:
            return check
    return None
