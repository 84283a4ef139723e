"""Total reflection (TR) ของ stack หลายชั้นระหว่างอากาศสองฝั่ง, TE/TM, oblique incidence

Recursion จากชั้นในสุดออกมา:
    TR_i = (R_i + TR_{i+1} e^{-2j kz_i d_i}) / (1 + R_i TR_{i+1} e^{-2j kz_i d_i})
    TR_{n+1} = R_{n+1}  (ด้านหลังเป็นอากาศ semi-infinite)

Snell's law ใช้ในรูป kx คงที่ทุก interface แทนมุมเชิงซ้อน
Units: ความหนาเก็บเป็น mm, ความถี่เป็น GHz, แปลงเป็น SI ตอนคำนวณเฟสเท่านั้น
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from core.errors import ConfigError, DomainError, SingularityError
from core.materials import AIR_ID, ComplexConstitutives, MaterialDatabase

ComplexReflection = complex

MM_TO_M = 1e-3
GHZ_TO_HZ = 1e9


class Polarization(str, Enum):
    TE = "TE"
    TM = "TM"


@dataclass(frozen=True)
class Layer:
    material_id: int
    thickness: float  # mm

    def __post_init__(self):
        if not np.isfinite(self.thickness) or self.thickness < 0:
            raise ConfigError(f"Layer thickness must be >= 0 mm, got {self.thickness!r}")


@dataclass(frozen=True)
class LayerStack:
    """ชั้นเรียงจากด้าน incidence (layer 1) ไปด้านหลัง (layer n)"""

    layers: tuple[Layer, ...] = ()

    def __len__(self) -> int:
        return len(self.layers)

    @property
    def total_thickness(self) -> float:
        return float(sum(layer.thickness for layer in self.layers))

    @property
    def material_ids(self) -> tuple[int, ...]:
        return tuple(layer.material_id for layer in self.layers)

    @property
    def thicknesses(self) -> tuple[float, ...]:
        return tuple(layer.thickness for layer in self.layers)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, float]]) -> "LayerStack":
        return cls(tuple(Layer(int(m), float(d)) for m, d in pairs))

    @classmethod
    def parse(cls, text: str) -> "LayerStack":
        """'9:0.7118,8:3.0' → LayerStack; สตริงว่าง = stack ว่าง"""
        pairs = []
        for chunk in (text or "").split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            mat, sep, thick = chunk.partition(":")
            if not sep:
                raise ConfigError(f"Stack entry must look like 'id:thickness', got {chunk!r}")
            try:
                pairs.append((int(mat), float(thick)))
            except ValueError as e:
                raise ConfigError(f"Bad stack entry {chunk!r}: {e}") from e
        return cls.from_pairs(pairs)

    def validate(self, db: MaterialDatabase):
        for index, layer in enumerate(self.layers, 1):
            if not db.has(layer.material_id):
                raise ConfigError(
                    f"Layer {index}: unknown material id {layer.material_id} "
                    f"(database has ids 1..{len(db)})"
                )

    def with_thickness(self, index: int, thickness: float) -> "LayerStack":
        """คืน stack ใหม่ที่เปลี่ยนความหนาชั้น index (0-based)"""
        layers = list(self.layers)
        layers[index] = Layer(layers[index].material_id, thickness)
        return LayerStack(tuple(layers))


@dataclass(frozen=True)
class PlaneWave:
    f: float  # GHz
    theta0: float  # degrees, วัดในอากาศด้านหน้า
    pol: Polarization

    def __post_init__(self):
        _check_frequency(self.f)
        _check_angle(self.theta0)
        object.__setattr__(self, "pol", Polarization(self.pol))


class SpectrumRow(NamedTuple):
    f: float
    theta: float
    tr_te: complex
    tr_tm: complex


def _check_frequency(f):
    f_arr = np.asarray(f, dtype=float)
    if f_arr.size == 0 or not np.all(np.isfinite(f_arr)) or np.any(f_arr <= 0):
        raise DomainError(f"Frequency must be finite and > 0 GHz, got {f!r}")


def _check_angle(theta):
    t_arr = np.asarray(theta, dtype=float)
    if t_arr.size == 0 or not np.all(np.isfinite(t_arr)) or np.any((t_arr < 0) | (t_arr >= 90)):
        raise DomainError(f"Incidence angle must satisfy 0 <= theta < 90 degrees, got {theta!r}")


def free_space_wavenumber(f):
    """k0 = 2πf/c (rad/m), f in GHz"""
    return 2 * np.pi * np.asarray(f, dtype=float) * GHZ_TO_HZ / SPEED_OF_LIGHT


def transverse_wavenumber(theta0, f):
    """kx = k0 sin θ0: คงที่ทุก interface (Snell)"""
    _check_angle(theta0)
    _check_frequency(f)
    kx = free_space_wavenumber(f) * np.sin(np.deg2rad(theta0))
    return float(kx) if np.ndim(kx) == 0 else kx


def _kz(k0, eps, mu, kx):
    """kz = sqrt(k0² μ ε − kx²), branch: Re >= 0, Im <= 0 (forward, decaying)"""
    kz = np.sqrt(k0**2 * (mu * eps) - kx**2 + 0j)
    # principal sqrt ให้ Re >= 0 แล้ว; เหลือกรณี Re = 0 ที่ Im > 0
    return np.where(kz.imag > 0, -kz, kz)


def longitudinal_wavenumber(c: ComplexConstitutives, f, kx):
    _check_frequency(f)
    kz = _kz(free_space_wavenumber(f), c.eps_r, c.mu_r, kx)
    return complex(kz) if np.ndim(kz) == 0 else kz


def _fresnel(w_before, w_after, kz_before, kz_after):
    """(w_after kz_before − w_before kz_after) / (w_after kz_before + w_before kz_after)

    w = μ สำหรับ TE, ε สำหรับ TM
    """
    num = w_after * kz_before - w_before * kz_after
    den = w_after * kz_before + w_before * kz_after
    if np.any(den == 0):
        raise SingularityError("Interface reflection denominator vanished")
    return num / den


def interface_reflection(before: ComplexConstitutives, after: ComplexConstitutives,
                         kz_before, kz_after, pol: Polarization) -> ComplexReflection:
    if Polarization(pol) is Polarization.TE:
        r = _fresnel(before.mu_r, after.mu_r, kz_before, kz_after)
    else:
        r = _fresnel(before.eps_r, after.eps_r, kz_before, kz_after)
    return complex(r) if np.ndim(r) == 0 else r


def stack_reflection(eps, mu, thickness_mm, k0, kx, pol: Polarization):
    """Vectorized recursion

    eps, mu: (..., n_layers, n_f): ไม่รวมอากาศสองฝั่ง, leading axes = batch ของ stack
    thickness_mm: (..., n_layers)
    k0: (n_f,), kx: (n_f, n_a)
    คืน TR shape (..., n_f, n_a)
    """
    eps = np.asarray(eps, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    d = np.asarray(thickness_mm, dtype=float) * MM_TO_M
    k0_col = np.asarray(k0, dtype=float)[:, None]
    kx = np.asarray(kx, dtype=float)
    n_layers = eps.shape[-2]
    batch = eps.shape[:-2]

    air_kz = _kz(k0_col, 1.0, 1.0, kx)
    air_kz = np.broadcast_to(air_kz, batch + air_kz.shape)
    air_w = np.ones(batch + (k0_col.shape[0], 1), dtype=complex)

    weights = mu if Polarization(pol) is Polarization.TE else eps
    # ทุกชั้นรวมอากาศหน้า/หลัง: index 0 = entry air, n+1 = exit air
    kz = [air_kz]
    w = [air_w]
    for i in range(n_layers):
        kz.append(_kz(k0_col, eps[..., i, :, None], mu[..., i, :, None], kx))
        w.append(weights[..., i, :, None])
    kz.append(air_kz)
    w.append(air_w)

    tr = _fresnel(w[n_layers], w[n_layers + 1], kz[n_layers], kz[n_layers + 1])
    for i in range(n_layers, 0, -1):
        r = _fresnel(w[i - 1], w[i], kz[i - 1], kz[i])
        phase = np.exp(-2j * kz[i] * d[..., i - 1, None, None])
        t = tr * phase
        tr = (r + t) / (1 + r * t)
    return np.broadcast_to(tr, batch + (k0_col.shape[0], kx.shape[-1]))


def _stack_constitutives(stack: LayerStack, db: MaterialDatabase, freqs: np.ndarray):
    stack.validate(db)
    eps = np.empty((len(stack), freqs.size), dtype=complex)
    mu = np.empty_like(eps)
    for i, layer in enumerate(stack.layers):
        c = db.constitutives(layer.material_id, freqs)
        eps[i], mu[i] = c.eps_r, c.mu_r
    return eps, mu


def reflection_grid(stack: LayerStack, db: MaterialDatabase, freqs, angles,
                    pol: Polarization) -> np.ndarray:
    """TR บน grid (n_f, n_a): รูป vectorized ของ total_reflection"""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    _check_frequency(freqs)
    _check_angle(angles)
    eps, mu = _stack_constitutives(stack, db, freqs)
    k0 = free_space_wavenumber(freqs)
    kx = k0[:, None] * np.sin(np.deg2rad(angles))[None, :]
    return stack_reflection(eps, mu, stack.thicknesses, k0, kx, pol)


def total_reflection(stack: LayerStack, db: MaterialDatabase, wave: PlaneWave) -> ComplexReflection:
    grid = reflection_grid(stack, db, [wave.f], [wave.theta0], wave.pol)
    return complex(grid[0, 0])


def tr_spectrum(stack: LayerStack, db: MaterialDatabase, freqs, angles) -> list[SpectrumRow]:
    """Cartesian product (f-major, แล้ว θ) ของ TR ทั้งสอง polarization"""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if freqs.size == 0 or angles.size == 0:
        raise DomainError("Frequency and angle grids must be non-empty")
    te = reflection_grid(stack, db, freqs, angles, Polarization.TE)
    tm = reflection_grid(stack, db, freqs, angles, Polarization.TM)
    return [
        SpectrumRow(float(f), float(theta), complex(te[i, j]), complex(tm[i, j]))
        for i, f in enumerate(freqs)
        for j, theta in enumerate(angles)
    ]


def air_constitutives() -> ComplexConstitutives:
    return ComplexConstitutives(1 + 0j, 1 + 0j)


__all__ = [
    "AIR_ID",
    "ComplexReflection",
    "Layer",
    "LayerStack",
    "PlaneWave",
    "Polarization",
    "SpectrumRow",
    "air_constitutives",
    "free_space_wavenumber",
    "interface_reflection",
    "longitudinal_wavenumber",
    "reflection_grid",
    "stack_reflection",
    "total_reflection",
    "tr_spectrum",
    "transverse_wavenumber",
]
