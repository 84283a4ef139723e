"""sweep: |TR| (dB) ของ stack ตามแกนเดียว (frequency, angle หรือ thickness ของชั้นหนึ่ง)"""

from __future__ import annotations

import argparse

import numpy as np

from core.config import RunConfig
from core.em_model import LayerStack, Polarization, reflection_grid
from core.errors import ConfigError
from core.logger import get_logger
from core.materials import MaterialDatabase
from core.objectives import to_db
from core.report_io import fmt_full, write_csv
from core.run_setup import load_materials, resolve_stack
from tools.base import BaseTool
from tools.response import CommandResult

log = get_logger(__name__)

AXES = ("frequency", "angle", "thickness")
_AXIS_COLUMN = {"frequency": "f_GHz", "angle": "theta_deg", "thickness": "thickness_mm"}
_DEFAULT_POINTS = {"frequency": 81, "angle": 46, "thickness": 61}


def _te_tm_db(stack: LayerStack, db: MaterialDatabase, freqs, angles) -> tuple[np.ndarray, np.ndarray]:
    te = reflection_grid(stack, db, freqs, angles, Polarization.TE)
    tm = reflection_grid(stack, db, freqs, angles, Polarization.TM)
    return to_db(te).ravel(), to_db(tm).ravel()


def sweep_values(start: float, stop: float, points: int) -> np.ndarray:
    if points < 2:
        raise ConfigError(f"A sweep needs at least 2 points, got {points}")
    return np.linspace(start, stop, points)


def run_sweep(stack: LayerStack, db: MaterialDatabase, axis: str, values: np.ndarray,
              frequency: float, angle: float, layer: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """คืน (TE dB, TM dB) ตามลำดับของ values"""
    if axis == "frequency":
        return _te_tm_db(stack, db, values, [angle])
    if axis == "angle":
        return _te_tm_db(stack, db, [frequency], values)
    if axis != "thickness":
        raise ConfigError(f"Unknown sweep axis {axis!r} (expected one of {', '.join(AXES)})")
    if not 1 <= layer <= len(stack):
        raise ConfigError(f"--layer must be within 1..{len(stack)}, got {layer}")
    te, tm = [], []
    for value in values:
        te_db, tm_db = _te_tm_db(stack.with_thickness(layer - 1, float(value)), db, [frequency], [angle])
        te.append(te_db[0])
        tm.append(tm_db[0])
    return np.array(te), np.array(tm)


def describe_trend(values: np.ndarray, tol: float = 1e-9) -> str:
    steps = np.diff(values)
    if np.all(steps >= -tol):
        return "non-decreasing"
    if np.all(steps <= tol):
        return "non-increasing"
    return "mixed"


class SweepTool(BaseTool):
    name = "sweep"
    description = "1-D sweep of |TR| along frequency, angle or one layer's thickness"

    def add_arguments(self, parser: argparse.ArgumentParser):
        parser.add_argument("--axis", choices=AXES, default="frequency")
        parser.add_argument("--layer", type=int, default=1, help="layer (1-based) for --axis thickness")
        parser.add_argument("--start", type=float, help="first axis value")
        parser.add_argument("--stop", type=float, help="last axis value")
        parser.add_argument("--points", type=int, help="number of axis samples")
        parser.add_argument("--frequency", type=float, default=10.0, help="fixed frequency (GHz)")
        parser.add_argument("--angle", type=float, default=0.0, help="fixed incidence angle (deg)")

    def _bounds(self, cfg: RunConfig, axis: str) -> tuple[float, float]:
        if axis == "frequency":
            return cfg.freq_range
        if axis == "angle":
            return 0.0, 45.0
        return cfg.thickness_bounds

    def execute(self, cfg: RunConfig, args: argparse.Namespace) -> CommandResult:
        db = load_materials(cfg)
        stack = resolve_stack(cfg, db)
        axis = args.axis
        lo, hi = self._bounds(cfg, axis)
        start = lo if args.start is None else args.start
        stop = hi if args.stop is None else args.stop
        points = _DEFAULT_POINTS[axis] if args.points is None else args.points

        values = sweep_values(start, stop, points)
        te, tm = run_sweep(stack, db, axis, values, args.frequency, args.angle, args.layer)
        trend = describe_trend(te)
        log.info("Sweep over %s: TE trend %s (%.2f dB .. %.2f dB)", axis, trend, te.min(), te.max())

        path = write_csv(
            cfg.output_dir / "sweep.csv",
            [_AXIS_COLUMN[axis], "TR_TE_dB", "TR_TM_dB"],
            [[repr(float(v)), fmt_full(a), fmt_full(b)] for v, a, b in zip(values, te, tm)],
        )
        text = f"Sweep over {axis} ({points} points): TE trend {trend} -> {path}"
        return CommandResult(text=text, files=[path])
