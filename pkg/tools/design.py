"""design: รัน MO-ABC แล้วเขียน pareto.csv, knee.txt, history.csv"""

from __future__ import annotations

import argparse

from core.config import RunConfig
from core.logger import get_logger
from core.materials import MaterialDatabase, describe
from core.moabc import ArchiveEntry, OptimizationResult, decode_arrays, run_optimization
from core.objectives import FilterSpec
from core.report_io import fmt_full, write_csv, write_text_atomic
from core.run_setup import build_abc_config, build_problem
from core.template_loader import load_template
from tools.base import BaseTool
from tools.response import CommandResult

log = get_logger(__name__)


def _decode(entry: ArchiveEntry, n_materials: int) -> list[tuple[int, float]]:
    ids, thick = decode_arrays(entry.position, n_materials)
    return list(zip(ids[0].tolist(), thick[0].tolist()))


def pareto_rows(result: OptimizationResult, n_materials: int) -> list[list[str]]:
    """เรียงตาม (of1, of2) เพื่อให้ไฟล์ไม่ขึ้นกับลำดับการเข้า archive"""
    entries = sorted(result.archive, key=lambda e: tuple(e.objectives))
    rows = []
    for entry in entries:
        row = [fmt_full(entry.objectives.of1), fmt_full(entry.objectives.of2)]
        for material_id, thickness in _decode(entry, n_materials):
            row += [str(material_id), fmt_full(thickness)]
        rows.append(row)
    return rows


def render_knee_report(spec: FilterSpec, entry: ArchiveEntry, db: MaterialDatabase) -> str:
    layers = _decode(entry, len(db))
    rows = "\n".join(
        f"{index:>5} | {material_id:>6} | {thickness:>14.4f} | {describe(db.get(material_id))}"
        for index, (material_id, thickness) in enumerate(layers, 1)
    )
    return load_template(
        "reports/knee.md",
        filter=spec.kind.value,
        rows=rows,
        total_thickness=f"{sum(t for _, t in layers):.4f}",
        of1=f"{entry.objectives.of1:.4f}",
        of2=f"{entry.objectives.of2:.4f}",
        of1_full=fmt_full(entry.objectives.of1),
        of2_full=fmt_full(entry.objectives.of2),
    )


class DesignTool(BaseTool):
    name = "design"
    description = "Optimize a filter stack and write the Pareto front"

    def execute(self, cfg: RunConfig, args: argparse.Namespace) -> CommandResult:
        problem = build_problem(cfg)
        abc = build_abc_config(cfg)
        result = run_optimization(problem, abc)
        n_materials = len(problem.db)

        header = ["of1", "of2"]
        for i in range(1, problem.n_layers + 1):
            header += [f"mat_{i}", f"thickness_{i}_mm"]

        out = cfg.output_dir
        files = [
            write_csv(out / "pareto.csv", header, pareto_rows(result, n_materials)),
            write_text_atomic(out / "knee.txt",
                              render_knee_report(problem.spec, result.knee, problem.db)),
            write_csv(
                out / "history.csv",
                ["iteration", "archive_size", "knee_of1", "knee_of2"],
                [[str(h.iteration), str(h.archive_size), fmt_full(h.knee.of1), fmt_full(h.knee.of2)]
                 for h in result.history],
            ),
        ]
        knee = result.knee.objectives
        text = (f"{problem.spec.kind.value} design: {len(result.archive)} Pareto solutions, "
                f"knee of1={knee.of1:.4f} of2={knee.of2:.4f} "
                f"({result.evaluations} evaluations) -> {out}")
        return CommandResult(text=text, files=files)
