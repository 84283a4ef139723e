"""Test readiness: pre-run checks per subcommand"""

from core.config import RunConfig
from core.readiness import (
    STATUS_FAIL,
    STATUS_OK,
    collect_run_readiness,
    first_failure,
    output_dir_is_writable,
    summarize_run_readiness,
)


def _check(report, name):
    return next(c for c in report["checks"] if c["name"] == name)


def test_design_ready_with_defaults(tmp_path):
    report = collect_run_readiness(RunConfig(output_dir=tmp_path / "out"), "design")
    assert report["status"] == STATUS_OK
    assert not report["should_fail_fast"]
    names = [c["name"] for c in report["checks"]]
    assert names[:4] == ["output_dir", "materials", "filter", "optimizer"]
    assert "stack" not in names


def test_evaluate_without_stack_fails_fast(tmp_path):
    report = collect_run_readiness(RunConfig(output_dir=tmp_path), "evaluate")
    assert report["should_fail_fast"]
    assert first_failure(report)["name"] == "stack"


def test_evaluate_with_stack_is_ready(tmp_path, stack_text):
    cfg = RunConfig(output_dir=tmp_path, stack=stack_text["lp"])
    report = collect_run_readiness(cfg, "evaluate")
    assert report["status"] == STATUS_OK
    assert _check(report, "stack")["summary"] == "5 layers"


def test_validate_needs_no_output_dir_or_stack(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    report = collect_run_readiness(RunConfig(output_dir=blocker / "out"), "validate")
    assert report["status"] == STATUS_OK


def test_unwritable_output_dir(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    assert not output_dir_is_writable(blocker / "out")
    assert output_dir_is_writable(tmp_path / "new" / "deep")
    report = collect_run_readiness(RunConfig(output_dir=blocker / "out"), "design")
    assert first_failure(report)["name"] == "output_dir"


def test_bad_settings_reported(tmp_path):
    cfg = RunConfig(output_dir=tmp_path, colony_size=7)
    assert _check(collect_run_readiness(cfg, "design"), "optimizer")["status"] == STATUS_FAIL

    cfg = RunConfig(output_dir=tmp_path, pass_bands=((2.0, 10.0),))
    assert _check(collect_run_readiness(cfg, "design"), "filter")["status"] == STATUS_FAIL

    missing = RunConfig(output_dir=tmp_path, materials_file=tmp_path / "none.csv")
    assert _check(collect_run_readiness(missing, "design"), "materials")["status"] == STATUS_FAIL


def test_too_many_workers_only_warns(tmp_path):
    cfg = RunConfig(output_dir=tmp_path, workers=100_000)
    report = collect_run_readiness(cfg, "design")
    assert report["status"] == "degraded"
    assert not report["should_fail_fast"]


def test_summary_lines(tmp_path):
    report = collect_run_readiness(RunConfig(output_dir=tmp_path), "evaluate")
    lines = summarize_run_readiness(report)
    assert any(line.startswith("[FAIL] stack:") for line in lines)
    assert any(line.startswith("[OK] materials:") for line in lines)
