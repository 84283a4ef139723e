"""Band layouts ของ LP/HP/BP filter และ objective คู่ (of1, of2) ที่ต้อง minimize

of1 = ค่าเฉลี่ย |TR| ใน pass band (TE+TM, ทุกมุม)
of2 = ค่าเฉลี่ย (1 − |TR|) ใน stop band (stop band ของ BP รวมเป็นก้อนเดียว)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from core.em_model import (
    LayerStack,
    Polarization,
    free_space_wavenumber,
    reflection_grid,
    stack_reflection,
)
from core.errors import ConfigError, DomainError
from core.materials import MaterialDatabase

Band = tuple[float, float]

DEFAULT_ANGLES = (0.0, 15.0, 30.0, 45.0)
DEFAULT_FREQ_STEP = 0.2  # GHz
DB_FLOOR = -200.0
_MAG_FLOOR = 10 ** (DB_FLOOR / 20)
_GRID_TOL = 1e-9


class FilterKind(str, Enum):
    LP = "LP"
    HP = "HP"
    BP = "BP"
    CUSTOM = "CUSTOM"


class BandRole(str, Enum):
    PASS = "pass"
    STOP = "stop"


class ObjectiveVector(NamedTuple):
    of1: float
    of2: float


class BandStatistics(NamedTuple):
    max_db: float
    avg_db: float
    min_db: float


class BandReportRow(NamedTuple):
    role: BandRole
    pol: Polarization
    angle: float
    stats: BandStatistics
    redundant: bool  # TM ที่ 0° ซ้ำกับ TE


def _bands_overlap(a: Band, b: Band) -> bool:
    return min(a[1], b[1]) - max(a[0], b[0]) > _GRID_TOL


@dataclass(frozen=True)
class FilterSpec:
    kind: FilterKind
    pass_bands: tuple[Band, ...]
    stop_bands: tuple[Band, ...]
    angles: tuple[float, ...] = DEFAULT_ANGLES
    freq_step: float = DEFAULT_FREQ_STEP

    def __post_init__(self):
        object.__setattr__(self, "kind", FilterKind(self.kind))
        if not self.pass_bands or not self.stop_bands:
            raise ConfigError("A filter needs at least one pass band and one stop band")
        if not self.angles:
            raise ConfigError("Angle grid must be non-empty")
        if not self.freq_step > 0:
            raise ConfigError(f"Frequency step must be > 0 GHz, got {self.freq_step!r}")
        for lo, hi in (*self.pass_bands, *self.stop_bands):
            if not 0 < lo <= hi:
                raise ConfigError(f"Band [{lo}, {hi}] GHz is not a valid interval")
        bands = [*self.pass_bands, *self.stop_bands]
        for i, a in enumerate(bands):
            for b in bands[i + 1:]:
                if _bands_overlap(a, b):
                    raise ConfigError(f"Bands {a} and {b} overlap beyond a shared cutoff")
        for theta in self.angles:
            if not 0 <= theta < 90:
                raise ConfigError(f"Angle {theta} outside [0, 90) degrees")

    def bands(self, role: BandRole) -> tuple[Band, ...]:
        return self.pass_bands if BandRole(role) is BandRole.PASS else self.stop_bands

    def grid(self, role: BandRole) -> np.ndarray:
        """จุดความถี่ทั้งหมดของ role (หลาย band ต่อกันตามลำดับ)"""
        return np.concatenate([band_grid(b, self.freq_step) for b in self.bands(role)])

    @property
    def n_angles(self) -> int:
        return len(self.angles)


def band_grid(band: Band, step: float) -> np.ndarray:
    """Inclusive grid lo, lo+step, ..., hi (รวม hi ถ้า (hi−lo)/step เป็นจำนวนเต็ม)"""
    lo, hi = float(band[0]), float(band[1])
    if lo > hi:
        raise DomainError(f"Band lower edge {lo} exceeds upper edge {hi}")
    if not step > 0:
        raise DomainError(f"Grid step must be > 0, got {step!r}")
    n = int(np.floor((hi - lo) / step + _GRID_TOL))
    points = lo + step * np.arange(n + 1)
    points[-1] = min(points[-1], hi)
    return np.round(points, 12)


_BUILTIN_BANDS = {
    FilterKind.LP: (((2.0, 10.0),), ((10.0, 18.0),)),
    FilterKind.HP: (((10.0, 18.0),), ((2.0, 10.0),)),
    FilterKind.BP: (((8.0, 12.0),), ((2.0, 8.0), (12.0, 18.0))),
}


def builtin_spec(kind: FilterKind | str, angles: Sequence[float] = DEFAULT_ANGLES,
                 freq_step: float = DEFAULT_FREQ_STEP) -> FilterSpec:
    try:
        kind = kind if isinstance(kind, FilterKind) else FilterKind(str(kind).upper())
        pass_bands, stop_bands = _BUILTIN_BANDS[kind]
    except (ValueError, KeyError) as e:
        raise ConfigError(f"Unknown filter kind {kind!r} (expected LP, HP or BP)") from e
    return FilterSpec(kind, pass_bands, stop_bands, tuple(angles), freq_step)


def to_db(magnitude) -> np.ndarray:
    """20 log10 |TR|: ค่า 0 ถูก clamp ไว้ที่ DB_FLOOR"""
    return 20 * np.log10(np.maximum(np.abs(magnitude), _MAG_FLOOR))


class ObjectiveEvaluator:
    """Precompute ε, μ ของทุก material บน grid ของ spec แล้วประเมินหลาย stack พร้อมกัน

    ลำดับการรวม: f-major, θ-minor, TE ก่อน TM: คงที่เพื่อให้ผลซ้ำได้ทุกครั้ง
    """

    def __init__(self, db: MaterialDatabase, spec: FilterSpec):
        self.db = db
        self.spec = spec
        pass_f = spec.grid(BandRole.PASS)
        stop_f = spec.grid(BandRole.STOP)
        self.n_pass = pass_f.size
        self.n_stop = stop_f.size
        self.freqs = np.concatenate([pass_f, stop_f])
        angles = np.asarray(spec.angles, dtype=float)
        self.k0 = free_space_wavenumber(self.freqs)
        self.kx = self.k0[:, None] * np.sin(np.deg2rad(angles))[None, :]
        self._eps_table, self._mu_table = db.table(self.freqs)

    def _magnitudes(self, material_ids: np.ndarray, thicknesses: np.ndarray) -> np.ndarray:
        """|TR| shape (B, n_f, n_a, 2): แกนสุดท้าย TE, TM"""
        eps = self._eps_table[material_ids]
        mu = self._mu_table[material_ids]
        te = stack_reflection(eps, mu, thicknesses, self.k0, self.kx, Polarization.TE)
        tm = stack_reflection(eps, mu, thicknesses, self.k0, self.kx, Polarization.TM)
        return np.stack([np.abs(te), np.abs(tm)], axis=-1)

    def evaluate_arrays(self, material_ids, thicknesses) -> list[ObjectiveVector]:
        """material_ids (B, n) int, thicknesses (B, n) mm: ทุก stack ต้องมีจำนวนชั้นเท่ากัน"""
        material_ids = np.asarray(material_ids, dtype=int)
        thicknesses = np.asarray(thicknesses, dtype=float)
        if material_ids.ndim != 2 or material_ids.shape != thicknesses.shape:
            raise ConfigError("material_ids and thicknesses must be matching (batch, layers) arrays")
        if material_ids.size and (material_ids.min() < 0 or material_ids.max() > len(self.db)):
            raise ConfigError(f"Material ids must lie in 0..{len(self.db)}")
        batch = material_ids.shape[0]
        if batch == 0:
            return []

        mags = self._magnitudes(material_ids, thicknesses)
        pass_mags = mags[:, : self.n_pass].reshape(batch, -1)
        stop_mags = mags[:, self.n_pass:].reshape(batch, -1)
        n_a = self.spec.n_angles
        of1 = pass_mags.sum(axis=1) / (2 * n_a * self.n_pass)
        of2 = (2.0 - stop_mags.reshape(batch, -1, 2).sum(axis=2)).sum(axis=1) / (2 * n_a * self.n_stop)
        return [ObjectiveVector(float(a), float(b)) for a, b in zip(of1, of2)]

    def evaluate_many(self, stacks: Sequence[LayerStack]) -> list[ObjectiveVector]:
        if not stacks:
            return []
        for stack in stacks:
            stack.validate(self.db)
        n_layers = {len(s) for s in stacks}
        if len(n_layers) != 1:
            raise ConfigError("evaluate_many needs stacks with equal layer counts")
        ids = np.array([s.material_ids for s in stacks], dtype=int).reshape(len(stacks), -1)
        thick = np.array([s.thicknesses for s in stacks], dtype=float).reshape(len(stacks), -1)
        return self.evaluate_arrays(ids, thick)

    def evaluate(self, stack: LayerStack) -> ObjectiveVector:
        return self.evaluate_many([stack])[0]


def evaluate_objectives(stack: LayerStack, db: MaterialDatabase, spec: FilterSpec) -> ObjectiveVector:
    return ObjectiveEvaluator(db, spec).evaluate(stack)


def band_statistics(stack: LayerStack, db: MaterialDatabase, spec: FilterSpec,
                    band_role: BandRole, pol: Polarization, angle: float) -> BandStatistics:
    """(max, mean, min) ของ 20 log10|TR| บน grid ของ band: mean คิดบนค่า dB"""
    if not any(abs(angle - a) < _GRID_TOL for a in spec.angles):
        raise DomainError(f"Angle {angle} is not on the spec's angle grid {spec.angles}")
    freqs = spec.grid(band_role)
    tr = reflection_grid(stack, db, freqs, [angle], pol)[:, 0]
    values = to_db(tr)
    return BandStatistics(float(values.max()), float(values.mean()), float(values.min()))


def band_report(stack: LayerStack, db: MaterialDatabase, spec: FilterSpec) -> list[BandReportRow]:
    """ทุก (role, pol, angle): pass ก่อน stop, TE ก่อน TM"""
    rows = []
    for role in (BandRole.PASS, BandRole.STOP):
        for pol in (Polarization.TE, Polarization.TM):
            for angle in spec.angles:
                stats = band_statistics(stack, db, spec, role, pol, angle)
                redundant = pol is Polarization.TM and angle == 0
                rows.append(BandReportRow(role, pol, float(angle), stats, redundant))
    return rows


def filter_spec_from_bands(pass_bands, stop_bands, angles=DEFAULT_ANGLES,
                           freq_step=DEFAULT_FREQ_STEP) -> FilterSpec:
    return FilterSpec(FilterKind.CUSTOM, tuple(map(tuple, pass_bands)),
                      tuple(map(tuple, stop_bands)), tuple(angles), freq_step)


__all__ = [
    "Band",
    "BandReportRow",
    "BandRole",
    "BandStatistics",
    "DB_FLOOR",
    "FilterKind",
    "FilterSpec",
    "ObjectiveEvaluator",
    "ObjectiveVector",
    "band_grid",
    "band_report",
    "band_statistics",
    "builtin_spec",
    "evaluate_objectives",
    "filter_spec_from_bands",
    "to_db",
]
