"""evaluate: spectrum, band statistics และ objectives ของ stack ที่ระบุ"""

from __future__ import annotations

import argparse

from core.config import RunConfig
from core.em_model import tr_spectrum
from core.logger import get_logger
from core.objectives import band_grid, band_report, evaluate_objectives, to_db
from core.report_io import fmt_db, fmt_full, write_csv, write_text_atomic
from core.run_setup import build_filter_spec, load_materials, resolve_stack
from tools.base import BaseTool
from tools.response import CommandResult

log = get_logger(__name__)


class EvaluateTool(BaseTool):
    name = "evaluate"
    description = "Report spectrum, band statistics and objectives of a given stack"

    def execute(self, cfg: RunConfig, args: argparse.Namespace) -> CommandResult:
        db = load_materials(cfg)
        spec = build_filter_spec(cfg)
        stack = resolve_stack(cfg, db)
        out = cfg.output_dir

        freqs = band_grid(cfg.freq_range, cfg.freq_step)
        spectrum = [
            [repr(row.f), repr(row.theta), fmt_full(to_db(row.tr_te)), fmt_full(to_db(row.tr_tm))]
            for row in tr_spectrum(stack, db, freqs, spec.angles)
        ]
        stats = [
            [row.role.value, row.pol.value, repr(row.angle), fmt_db(row.stats.max_db),
             fmt_db(row.stats.avg_db), fmt_db(row.stats.min_db), "yes" if row.redundant else "no"]
            for row in band_report(stack, db, spec)
        ]
        objectives = evaluate_objectives(stack, db, spec)

        files = [
            write_csv(out / "spectrum.csv", ["f_GHz", "theta_deg", "TR_TE_dB", "TR_TM_dB"], spectrum),
            write_csv(out / "bandstats.csv",
                      ["band", "polarization", "theta_deg", "max_dB", "avg_dB", "min_dB", "redundant"],
                      stats),
            write_text_atomic(
                out / "objectives.txt",
                f"of1={fmt_full(objectives.of1)}\n"
                f"of2={fmt_full(objectives.of2)}\n"
                f"TT_mm={fmt_full(stack.total_thickness)}\n",
            ),
        ]
        text = (f"{spec.kind.value} evaluation of {len(stack)}-layer stack "
                f"(TT {stack.total_thickness:.4f} mm): of1={objectives.of1:.4f} "
                f"of2={objectives.of2:.4f} -> {out}")
        return CommandResult(text=text, files=files)
