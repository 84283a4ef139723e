"""Frequency-dependent artificial material database + dispersion laws

ค่าที่คืนใช้ time convention e^{+jωt}: eps_r = ε′ − jε″, mu_r = μ′ − jμ″
ดังนั้น material ที่ passive จะมี Im(eps_r) <= 0 และ Im(mu_r) <= 0

Material id 0 สงวนไว้สำหรับอากาศ (ε_r = μ_r = 1), id 1..N คือ database
"""

from __future__ import annotations

import csv
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar

import numpy as np

from core.errors import ConfigError, DomainError
from core.logger import get_logger

log = get_logger(__name__)

AIR_ID = 0


@dataclass(frozen=True)
class ComplexConstitutives:
    """ε_r และ μ_r เชิงซ้อนที่ความถี่หนึ่ง (scalar) หรือหลายความถี่ (ndarray)"""

    eps_r: complex | np.ndarray
    mu_r: complex | np.ndarray


def _require_positive(name: str, value: float):
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a finite positive number, got {value!r}")


def _require_finite(name: str, value: float):
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")


class MaterialModel(ABC):
    """Dispersion law หนึ่งตัว: subclass ต้อง implement _evaluate บน array ของความถี่ (GHz)"""

    tag: ClassVar[str] = ""

    @abstractmethod
    def _evaluate(self, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ...

    @abstractmethod
    def params(self) -> tuple[float, ...]:
        """พารามิเตอร์ตามลำดับเดียวกับ material file"""


@dataclass(frozen=True)
class LosslessDielectric(MaterialModel):
    eps_real: float

    tag: ClassVar[str] = "dielectric"

    def __post_init__(self):
        _require_positive("eps_real", self.eps_real)

    def _evaluate(self, f):
        ones = np.ones_like(f, dtype=complex)
        return self.eps_real * ones, ones

    def params(self):
        return (self.eps_real,)


@dataclass(frozen=True)
class LossyMagneticPowerLaw(MaterialModel):
    """μ′(f) = μ′(1GHz)/f^α, μ″(f) = μ″(1GHz)/f^β, ε fixed at 15"""

    mu1: float
    alpha: float
    mu1_imag: float
    beta: float

    tag: ClassVar[str] = "magnetic_power"
    EPS_REAL: ClassVar[float] = 15.0

    def __post_init__(self):
        _require_positive("mu1", self.mu1)
        _require_positive("mu1_imag", self.mu1_imag)
        _require_finite("alpha", self.alpha)
        _require_finite("beta", self.beta)

    def _evaluate(self, f):
        mu = self.mu1 / f**self.alpha - 1j * (self.mu1_imag / f**self.beta)
        return np.full_like(mu, self.EPS_REAL), mu

    def params(self):
        return (self.mu1, self.alpha, self.mu1_imag, self.beta)


@dataclass(frozen=True)
class LossyDielectricPowerLaw(MaterialModel):
    """ε′(f) = ε′(1GHz)/f^α, ε″(f) = ε″(1GHz)/f^β, μ fixed at 1"""

    eps1: float
    alpha: float
    eps1_imag: float
    beta: float

    tag: ClassVar[str] = "dielectric_power"

    def __post_init__(self):
        _require_positive("eps1", self.eps1)
        _require_positive("eps1_imag", self.eps1_imag)
        _require_finite("alpha", self.alpha)
        _require_finite("beta", self.beta)

    def _evaluate(self, f):
        eps = self.eps1 / f**self.alpha - 1j * (self.eps1_imag / f**self.beta)
        return eps, np.ones_like(eps)

    def params(self):
        return (self.eps1, self.alpha, self.eps1_imag, self.beta)


@dataclass(frozen=True)
class RelaxationMagnetic(MaterialModel):
    """μ′(f) = μ_m f_m² / (f² + f_m²), μ″(f) = μ_m f_m f / (f² + f_m²), ε fixed at 15"""

    mu_m: float
    f_m: float  # GHz

    tag: ClassVar[str] = "relaxation"
    EPS_REAL: ClassVar[float] = 15.0

    def __post_init__(self):
        _require_positive("mu_m", self.mu_m)
        _require_positive("f_m", self.f_m)

    def _evaluate(self, f):
        den = f**2 + self.f_m**2
        mu = self.mu_m * self.f_m**2 / den - 1j * (self.mu_m * self.f_m * f / den)
        return np.full_like(mu, self.EPS_REAL), mu

    def params(self):
        return (self.mu_m, self.f_m)


AIR = LosslessDielectric(1.0)


def eval_material(mat: MaterialModel, f: float | np.ndarray) -> ComplexConstitutives:
    """ประเมิน ε_r, μ_r ที่ความถี่ f (GHz): scalar in → scalar out"""
    f_arr = np.asarray(f, dtype=float)
    if f_arr.size == 0 or not np.all(np.isfinite(f_arr)) or np.any(f_arr <= 0):
        raise DomainError(f"Frequency must be finite and > 0 GHz, got {f!r}")
    eps, mu = mat._evaluate(f_arr)
    if f_arr.ndim == 0:
        return ComplexConstitutives(complex(eps), complex(mu))
    return ComplexConstitutives(eps, mu)


def describe(mat: MaterialModel) -> str:
    if isinstance(mat, LosslessDielectric):
        return f"lossless dielectric eps'={mat.eps_real:g}"
    if isinstance(mat, LossyMagneticPowerLaw):
        return (f"lossy magnetic mu'(1GHz)={mat.mu1:g} a={mat.alpha:g} "
                f"mu''(1GHz)={mat.mu1_imag:g} b={mat.beta:g}")
    if isinstance(mat, LossyDielectricPowerLaw):
        return (f"lossy dielectric eps'(1GHz)={mat.eps1:g} a={mat.alpha:g} "
                f"eps''(1GHz)={mat.eps1_imag:g} b={mat.beta:g}")
    if isinstance(mat, RelaxationMagnetic):
        return f"relaxation magnetic mu_m={mat.mu_m:g} f_m={mat.f_m:g} GHz"
    return type(mat).__name__


@dataclass(frozen=True)
class MaterialDatabase:
    """Ordered materials, id 1-based; id 0 = อากาศ"""

    materials: tuple[MaterialModel, ...]

    def __post_init__(self):
        if not self.materials:
            raise ConfigError("Material database is empty")

    def __len__(self) -> int:
        return len(self.materials)

    @property
    def ids(self) -> range:
        return range(1, len(self.materials) + 1)

    def has(self, material_id: int) -> bool:
        return material_id == AIR_ID or 1 <= material_id <= len(self.materials)

    def get(self, material_id: int) -> MaterialModel:
        if material_id == AIR_ID:
            return AIR
        if not self.has(material_id):
            raise ConfigError(
                f"Unknown material id {material_id} (database has ids 1..{len(self.materials)})"
            )
        return self.materials[material_id - 1]

    def constitutives(self, material_id: int, f: float | np.ndarray) -> ComplexConstitutives:
        return eval_material(self.get(material_id), f)

    def table(self, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """ε_r, μ_r ของทุก id (แถว 0 = อากาศ) บน grid f → shape (N+1, len(f))"""
        f_arr = np.atleast_1d(np.asarray(f, dtype=float))
        eps = np.empty((len(self) + 1, f_arr.size), dtype=complex)
        mu = np.empty_like(eps)
        for material_id in range(len(self) + 1):
            c = self.constitutives(material_id, f_arr)
            eps[material_id], mu[material_id] = c.eps_r, c.mu_r
        return eps, mu


_BUILTIN = MaterialDatabase((
    # 1-2 lossless dielectric (μ = 1)
    LosslessDielectric(10.0),
    LosslessDielectric(50.0),
    # 3-5 lossy magnetic, ε = 15
    LossyMagneticPowerLaw(5.0, 0.974, 10.0, 0.961),
    LossyMagneticPowerLaw(3.0, 1.000, 15.0, 0.957),
    LossyMagneticPowerLaw(7.0, 1.000, 12.0, 1.000),
    # 6-8 lossy dielectric, μ = 1
    LossyDielectricPowerLaw(5.0, 0.861, 8.0, 0.569),
    LossyDielectricPowerLaw(8.0, 0.778, 10.0, 0.682),
    LossyDielectricPowerLaw(10.0, 0.778, 6.0, 0.861),
    # 9-16 relaxation-type magnetic, ε = 15
    RelaxationMagnetic(35.0, 0.8),
    RelaxationMagnetic(35.0, 0.5),
    RelaxationMagnetic(30.0, 1.0),
    RelaxationMagnetic(18.0, 0.5),
    RelaxationMagnetic(20.0, 1.5),
    RelaxationMagnetic(30.0, 2.5),
    RelaxationMagnetic(30.0, 2.0),
    RelaxationMagnetic(25.0, 3.5),
))


def builtin_database() -> MaterialDatabase:
    return _BUILTIN


_VARIANTS: dict[str, type[MaterialModel]] = {
    cls.tag: cls
    for cls in (LosslessDielectric, LossyMagneticPowerLaw, LossyDielectricPowerLaw, RelaxationMagnetic)
}
_PARAM_COUNT = {
    "dielectric": 1,
    "magnetic_power": 4,
    "dielectric_power": 4,
    "relaxation": 2,
}


def load_database_file(path: str | Path) -> MaterialDatabase:
    """โหลด material file: หนึ่งบรรทัดต่อ material (id,tag,param,..., # = comment)"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read material file {path}: {e}") from e

    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    materials: list[MaterialModel] = []
    for lineno, row in enumerate(csv.reader(lines), 1):
        row = [cell.strip() for cell in row]
        if len(row) < 2:
            raise ConfigError(f"{path} record {lineno}: expected 'id,tag,params...', got {row}")
        raw_id, tag, *raw_params = row
        try:
            material_id = int(raw_id)
        except ValueError as e:
            raise ConfigError(f"{path} record {lineno}: material id must be an integer") from e
        if material_id != len(materials) + 1:
            raise ConfigError(
                f"{path} record {lineno}: ids must be contiguous from 1, "
                f"expected {len(materials) + 1} got {material_id}"
            )
        cls = _VARIANTS.get(tag)
        if cls is None:
            raise ConfigError(f"{path} record {lineno}: unknown variant tag {tag!r} "
                              f"(known: {', '.join(sorted(_VARIANTS))})")
        if len(raw_params) != _PARAM_COUNT[tag]:
            raise ConfigError(f"{path} record {lineno}: {tag} takes {_PARAM_COUNT[tag]} "
                              f"parameter(s), got {len(raw_params)}")
        try:
            params = [float(p) for p in raw_params]
        except ValueError as e:
            raise ConfigError(f"{path} record {lineno}: parameters must be numbers") from e
        materials.append(cls(*params))

    if not materials:
        raise ConfigError(f"Material file {path} contains no materials")

    log.info("Loaded %d materials from %s", len(materials), path)
    return MaterialDatabase(tuple(materials))
