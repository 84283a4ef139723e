"""Independent oracles สำหรับตรวจ em_model และ Pareto archive

- tmm_total_reflection: characteristic (transfer) matrix ต่อชั้น
- airy_single_layer: closed form ของ slab เดี่ยวในอากาศ
- brute_force_pareto: O(n²) dominance scan

ห้าม import อะไรจาก recursion ใน em_model: kz คำนวณใหม่ในรูปมุม (cmath scalar)
การเรียก em_model.total_reflection ใน suite ดึงผ่าน module attribute ตอนรัน
เพื่อให้ test ที่ monkeypatch recursion ถูกจับได้
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from core import em_model
from core.em_model import LayerStack, PlaneWave, Polarization
from core.errors import ConfigError
from core.logger import get_logger
from core.materials import LosslessDielectric, MaterialDatabase
from core.moabc import ParetoArchive

log = get_logger(__name__)

TMM_TOL = 1e-9
AIRY_TOL = 1e-12
PASSIVITY_TOL = 1e-9
ZERO_THICKNESS_TOL = 1e-12
NORMAL_INCIDENCE_TOL = 1e-12
ORACLE_ANGLES = (0.0, 15.0, 30.0, 45.0)
SUITE_NAMES = ("tmm", "airy", "pareto", "passivity", "zero_thickness", "normal_incidence")


def _wavenumber(f_ghz: float) -> float:
    return 2 * math.pi * f_ghz * 1e9 / SPEED_OF_LIGHT


def _oracle_kz(k0: float, eps: complex, mu: complex, theta0_deg: float) -> complex:
    """kz = k0 n cos θ_t โดย sin θ_t = sin θ0 / n: เลือก branch ที่ decay ไปทาง +z"""
    n = cmath.sqrt(complex(eps) * complex(mu))
    sin_t = math.sin(math.radians(theta0_deg)) / n
    cos_t = cmath.sqrt(1 - sin_t * sin_t)
    kz = k0 * n * cos_t
    if kz.imag > 0 or (kz.imag == 0 and kz.real < 0):
        kz = -kz
    return kz


def _admittance(kz: complex, eps: complex, mu: complex, pol: Polarization) -> complex:
    return kz / mu if pol is Polarization.TE else kz / eps


def characteristic_matrix(q: complex, delta: complex) -> np.ndarray:
    """[[cos δ, j sin δ / q], [j q sin δ, cos δ]] สำหรับ time convention e^{+jωt}"""
    cos_d, sin_d = cmath.cos(delta), cmath.sin(delta)
    return np.array([[cos_d, 1j * sin_d / q], [1j * q * sin_d, cos_d]], dtype=complex)


def tmm_total_reflection(stack: LayerStack, db: MaterialDatabase,
                         wave: PlaneWave) -> complex:
    stack.validate(db)
    pol = Polarization(wave.pol)
    k0 = _wavenumber(wave.f)
    q0 = _admittance(_oracle_kz(k0, 1, 1, wave.theta0), 1, 1, pol)

    m = np.eye(2, dtype=complex)
    for layer in stack.layers:
        c = db.constitutives(layer.material_id, wave.f)
        kz = _oracle_kz(k0, c.eps_r, c.mu_r, wave.theta0)
        q = _admittance(kz, c.eps_r, c.mu_r, pol)
        m = m @ characteristic_matrix(q, kz * layer.thickness * 1e-3)

    # exit medium = อากาศ, q_exit = q0
    left = (m[0, 0] + m[0, 1] * q0) * q0
    right = m[1, 0] + m[1, 1] * q0
    return complex((left - right) / (left + right))


def airy_single_layer(eps_r: complex, mu_r: complex, d: float, wave: PlaneWave) -> complex:
    """r = (r1 + r2 e^{-2j kz d}) / (1 + r1 r2 e^{-2j kz d}), d ใน mm"""
    pol = Polarization(wave.pol)
    k0 = _wavenumber(wave.f)
    q0 = _admittance(_oracle_kz(k0, 1, 1, wave.theta0), 1, 1, pol)
    kz = _oracle_kz(k0, eps_r, mu_r, wave.theta0)
    q1 = _admittance(kz, eps_r, mu_r, pol)
    r1 = (q0 - q1) / (q0 + q1)
    r2 = (q1 - q0) / (q1 + q0)
    phase = cmath.exp(-2j * kz * d * 1e-3)
    return (r1 + r2 * phase) / (1 + r1 * r2 * phase)


def brute_force_pareto(points: Iterable[Sequence[float]]) -> list[tuple[float, ...]]:
    """จุดที่ไม่ถูกจุดอื่น dominate (ตัวซ้ำเก็บครั้งเดียว) ตามลำดับ input"""
    pts = [tuple(float(v) for v in p) for p in points]
    if not pts:
        return []
    arr = np.array(pts, dtype=float)
    front: list[tuple[float, ...]] = []
    seen: set[tuple[float, ...]] = set()
    for i, p in enumerate(arr):
        dominated = np.any(np.all(arr <= p, axis=1) & np.any(arr < p, axis=1))
        if not dominated and pts[i] not in seen:
            seen.add(pts[i])
            front.append(pts[i])
    return front


def archive_front(points: Iterable[Sequence[float]]) -> list[tuple[float, ...]]:
    """ใส่จุดทีละตัวผ่าน ParetoArchive: ใช้เทียบกับ brute_force_pareto"""
    archive = ParetoArchive()
    for p in points:
        archive.offer(np.zeros(0), p)
    return [tuple(o) for o in archive.objectives()]


# =====================================================================
# Oracle suites (ใช้โดย `validate`)
# =====================================================================

@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    cases: int
    detail: str = ""


@dataclass(frozen=True)
class _Case:
    stack: LayerStack
    f: float
    theta: float


def _random_cases(db: MaterialDatabase, rng: np.random.Generator, n: int,
                  max_layers: int = 8) -> list[_Case]:
    cases = []
    for _ in range(n):
        n_layers = int(rng.integers(1, max_layers + 1))
        ids = rng.integers(1, len(db) + 1, size=n_layers)
        thick = rng.uniform(0.0, 3.0, size=n_layers)
        stack = LayerStack.from_pairs(list(zip(ids.tolist(), thick.tolist())))
        f = float(rng.uniform(2.0, 18.0))
        theta = float(rng.choice(ORACLE_ANGLES))
        cases.append(_Case(stack, f, theta))
    return cases


def _waves(case: _Case):
    for pol in (Polarization.TE, Polarization.TM):
        yield PlaneWave(case.f, case.theta, pol)


def _tmm_suite(db, cases) -> SuiteResult:
    worst = 0.0
    for case in cases:
        for wave in _waves(case):
            tr = em_model.total_reflection(case.stack, db, wave)
            worst = max(worst, abs(tr - tmm_total_reflection(case.stack, db, wave)))
    return SuiteResult("tmm", worst < TMM_TOL, worst, TMM_TOL, 2 * len(cases),
                       "recursion vs transfer matrix")


def _passivity_suite(db, cases) -> SuiteResult:
    worst = 0.0
    for case in cases:
        for wave in _waves(case):
            worst = max(worst, abs(em_model.total_reflection(case.stack, db, wave)))
    excess = max(0.0, worst - 1.0)
    return SuiteResult("passivity", excess <= PASSIVITY_TOL, excess, PASSIVITY_TOL,
                       2 * len(cases), f"max |TR| = {worst:.12f}")


def _airy_suite(db, rng, n) -> SuiteResult:
    worst = 0.0
    for _ in range(n):
        material_id = int(rng.integers(1, len(db) + 1))
        d = float(rng.uniform(0.0, 3.0))
        case = _Case(LayerStack.from_pairs([(material_id, d)]), float(rng.uniform(2.0, 18.0)),
                     float(rng.choice(ORACLE_ANGLES)))
        for wave in _waves(case):
            c = db.constitutives(material_id, wave.f)
            closed = airy_single_layer(c.eps_r, c.mu_r, d, wave)
            worst = max(worst, abs(em_model.total_reflection(case.stack, db, wave) - closed))

    # quarter-wave / half-wave ของ slab ε_r = 10 ที่ normal incidence
    slab_db = MaterialDatabase((LosslessDielectric(10.0),))
    f = 10.0
    quarter = SPEED_OF_LIGHT / (4 * f * 1e9 * math.sqrt(10.0)) * 1e3
    checks = (
        (quarter, 9 / 11),
        (2 * quarter, 0.0),
    )
    for d, expected in checks:
        wave = PlaneWave(f, 0.0, Polarization.TE)
        tr = em_model.total_reflection(LayerStack.from_pairs([(1, d)]), slab_db, wave)
        worst = max(worst, abs(abs(tr) - expected),
                    abs(abs(airy_single_layer(10.0, 1.0, d, wave)) - expected))
    return SuiteResult("airy", worst < AIRY_TOL, worst, AIRY_TOL, 2 * n + len(checks),
                       "single slab closed form, quarter-wave 9/11, half-wave 0")


def _pareto_suite(rng, n_sets, n_points) -> SuiteResult:
    mismatches = 0
    for _ in range(n_sets):
        points = rng.random((n_points, 2))
        expected = set(brute_force_pareto(points))
        shuffled = points[rng.permutation(n_points)]
        if set(archive_front(shuffled)) != expected:
            mismatches += 1
    return SuiteResult("pareto", mismatches == 0, float(mismatches), 0.0, n_sets,
                       f"{n_points} points per set, order-shuffled")


def _zero_thickness_suite(db, rng, cases) -> SuiteResult:
    worst = 0.0
    for case in cases:
        layers = list(case.stack.layers)
        position = int(rng.integers(0, len(layers) + 1))
        inserted = int(rng.integers(1, len(db) + 1))
        padded = LayerStack.from_pairs(
            [(l.material_id, l.thickness) for l in layers[:position]]
            + [(inserted, 0.0)]
            + [(l.material_id, l.thickness) for l in layers[position:]]
        )
        for wave in _waves(case):
            delta = abs(em_model.total_reflection(padded, db, wave)
                        - em_model.total_reflection(case.stack, db, wave))
            worst = max(worst, delta)
    return SuiteResult("zero_thickness", worst < ZERO_THICKNESS_TOL, worst, ZERO_THICKNESS_TOL,
                       2 * len(cases), "zero-thickness layer inserted at a random position")


def _normal_incidence_suite(db, cases) -> SuiteResult:
    worst = 0.0
    for case in cases:
        te = em_model.total_reflection(case.stack, db, PlaneWave(case.f, 0.0, Polarization.TE))
        tm = em_model.total_reflection(case.stack, db, PlaneWave(case.f, 0.0, Polarization.TM))
        worst = max(worst, abs(abs(te) - abs(tm)))
    return SuiteResult("normal_incidence", worst < NORMAL_INCIDENCE_TOL, worst,
                       NORMAL_INCIDENCE_TOL, len(cases), "|TR_TE| = |TR_TM| at 0 deg")


def run_oracle_suites(db: MaterialDatabase, seed: int = 0, n_stacks: int = 1000,
                      n_pareto_sets: int = 200, n_pareto_points: int = 1000,
                      suites: Sequence[str] | None = None) -> list[SuiteResult]:
    """รันทุก suite (หรือเฉพาะที่ระบุ) ด้วย RNG ที่ seed ไว้: ผลซ้ำได้ทุกครั้ง"""
    selected = tuple(suites) if suites else SUITE_NAMES
    unknown = set(selected) - set(SUITE_NAMES)
    if unknown:
        raise ConfigError(f"Unknown oracle suite(s): {sorted(unknown)}")
    if n_stacks < 1 or n_pareto_sets < 1 or n_pareto_points < 1:
        raise ConfigError("Oracle suite sizes must be >= 1")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    cases = _random_cases(db, rng, n_stacks)
    results: list[SuiteResult] = []
    for name in selected:
        if name == "tmm":
            result = _tmm_suite(db, cases)
        elif name == "passivity":
            result = _passivity_suite(db, cases)
        elif name == "airy":
            result = _airy_suite(db, rng, max(1, n_stacks // 10))
        elif name == "pareto":
            result = _pareto_suite(rng, n_pareto_sets, n_pareto_points)
        elif name == "zero_thickness":
            result = _zero_thickness_suite(db, rng, cases[: max(1, n_stacks // 5)])
        else:
            result = _normal_incidence_suite(db, cases[: max(1, n_stacks // 5)])
        level = log.info if result.passed else log.error
        level("Oracle suite %s: %s (max deviation %.3e, tol %.0e, %d cases)", result.name,
              "PASS" if result.passed else "FAIL", result.max_deviation, result.tolerance,
              result.cases)
        results.append(result)
    return results
