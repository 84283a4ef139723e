"""Multi-objective artificial bee colony (MO-ABC)

Decision vector ของ stack n ชั้น: [d_1..d_n, m_1..m_n]
    d_j = ความหนา (mm) ใน [d_l, d_u]
    m_j = material แบบต่อเนื่องใน [1, M] ปัดเป็น id ตอน decode

ทุก phase สร้าง trial จาก sources ล่าสุดที่ commit แล้ว, ประเมินเป็น batch ที่ target ไม่ซ้ำกัน
แล้ว commit ตามลำดับ draw: RNG ทั้งหมดมาจาก numpy Generator ตัวเดียว
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from core.concurrency import BatchEvaluator
from core.em_model import LayerStack
from core.errors import ConfigError, EmptyArchiveError
from core.logger import get_logger
from core.materials import MaterialDatabase
from core.objectives import FilterSpec, ObjectiveEvaluator, ObjectiveVector

log = get_logger(__name__)

DUPLICATE_TOL = 1e-12
BatchFn = Callable[[np.ndarray], list[ObjectiveVector]]


# =====================================================================
# Configuration + search space
# =====================================================================

@dataclass(frozen=True)
class AbcConfig:
    colony_size: int = 100  # NP, employed + onlooker
    iterations: int = 1000  # NI
    limit: int = 100
    seed: int = 0
    archive_cap: int | None = None  # None = ไม่จำกัด
    workers: int = 1

    def __post_init__(self):
        if self.colony_size < 4 or self.colony_size % 2:
            raise ConfigError(f"Colony size NP must be even and >= 4, got {self.colony_size}")
        if self.iterations < 0:
            raise ConfigError(f"Iteration count NI must be >= 0, got {self.iterations}")
        if self.limit < 1:
            raise ConfigError(f"limit must be >= 1, got {self.limit}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.archive_cap is not None and self.archive_cap < 2:
            raise ConfigError(f"archive cap must be >= 2 when set, got {self.archive_cap}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    @property
    def food_sources(self) -> int:
        """SN = NP/2"""
        return self.colony_size // 2


@dataclass(frozen=True, eq=False)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ConfigError("lower and upper bounds must be 1-D arrays of equal length")
        if np.any(upper < lower):
            raise ConfigError("upper bound must be >= lower bound in every dimension")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def for_layers(cls, n_layers: int, thickness: tuple[float, float] = (0.0, 3.0),
                   materials: tuple[int, int] = (1, 16)) -> "SearchSpace":
        if n_layers < 1:
            raise ConfigError(f"Layer count must be >= 1, got {n_layers}")
        if thickness[0] < 0:
            raise ConfigError(f"Thickness lower bound must be >= 0 mm, got {thickness[0]}")
        if materials[0] < 1:
            raise ConfigError(f"Material ids start at 1, got lower bound {materials[0]}")
        lower = [thickness[0]] * n_layers + [float(materials[0])] * n_layers
        upper = [thickness[1]] * n_layers + [float(materials[1])] * n_layers
        return cls(np.array(lower), np.array(upper))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def n_layers(self) -> int:
        return self.dim // 2

    def clip(self, v: np.ndarray) -> np.ndarray:
        return np.clip(v, self.lower, self.upper)


# =====================================================================
# Food sources, fitness, selection
# =====================================================================

def fitness(of_value: float) -> float:
    if of_value >= 0:
        return 1.0 / (1.0 + of_value)
    return 1.0 + abs(of_value)


def fitness_vector(objectives: Iterable[float]) -> tuple[float, ...]:
    return tuple(fitness(v) for v in objectives)


@dataclass(eq=False)
class FoodSource:
    position: np.ndarray
    objectives: ObjectiveVector
    fitness: tuple[float, ...]
    trials: int = 0

    @classmethod
    def evaluated(cls, position: np.ndarray, objectives: ObjectiveVector) -> "FoodSource":
        return cls(np.array(position, dtype=float), objectives, fitness_vector(objectives), 0)


def selection_probabilities(fitnesses: Sequence[Sequence[float]]) -> np.ndarray:
    """prob_i = fit_i / Σ fit: fitness คู่ถูก scalarize ด้วยค่าเฉลี่ยก่อน"""
    scalar = np.array([float(np.mean(f)) for f in fitnesses], dtype=float)
    if scalar.size == 0:
        return scalar
    total = scalar.sum()
    if not total > 0:
        return np.full(scalar.size, 1.0 / scalar.size)
    return scalar / total


def neighbor(current: np.ndarray, partner: np.ndarray, j: int, rng: np.random.Generator,
             space: SearchSpace, phi: float | None = None) -> np.ndarray:
    """v_j = x_j + φ (x_j − x_kj), φ ~ U[-1, 1]; เปลี่ยนเฉพาะมิติ j (0-based) แล้ว clamp"""
    if phi is None:
        phi = rng.uniform(-1.0, 1.0)
    v = np.array(current, dtype=float)
    v[j] = current[j] + phi * (current[j] - partner[j])
    return space.clip(v)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """a dominates b (minimization)"""
    no_worse = all(x <= y for x, y in zip(a, b))
    return no_worse and any(x < y for x, y in zip(a, b))


def greedy_replace(source: FoodSource, candidate: FoodSource,
                   rng: np.random.Generator) -> FoodSource:
    """Pareto replacement ระหว่าง source เดิมกับ candidate ใหม่

    candidate ชนะ → แทนที่, trials = 0
    source ชนะ → เก็บไว้, trials + 1
    ไม่มีใครชนะ → โยนเหรียญ rand < 0.5 รับ candidate, ไม่งั้น trials + 1
    """
    if dominates(candidate.objectives, source.objectives):
        return replace(candidate, trials=0)
    if dominates(source.objectives, candidate.objectives):
        return replace(source, trials=source.trials + 1)
    if rng.random() < 0.5:
        return replace(candidate, trials=0)
    return replace(source, trials=source.trials + 1)


# =====================================================================
# Pareto archive
# =====================================================================

class ArchiveEntry(NamedTuple):
    position: np.ndarray
    objectives: ObjectiveVector


class ParetoArchive:
    """ชุด (decision, objective) ที่ไม่ dominate กันเอง, ไม่มีตัวซ้ำ (ระยะ objective < 1e-12)"""

    def __init__(self, cap: int | None = None):
        self.cap = cap
        self._entries: list[ArchiveEntry] = []

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[ArchiveEntry]:
        return iter(self._entries)

    @property
    def entries(self) -> tuple[ArchiveEntry, ...]:
        return tuple(self._entries)

    def objectives(self) -> list[ObjectiveVector]:
        return [e.objectives for e in self._entries]

    def offer(self, position: np.ndarray, objectives: Sequence[float]) -> bool:
        """ใส่ entry ถ้าไม่มีสมาชิกไหน dominate: return True ถ้ารับเข้า"""
        objectives = ObjectiveVector(*map(float, objectives))
        for member in self._entries:
            if dominates(member.objectives, objectives):
                return False
            if math.dist(member.objectives, objectives) < DUPLICATE_TOL:
                return False
        self._entries = [m for m in self._entries if not dominates(objectives, m.objectives)]
        self._entries.append(ArchiveEntry(np.array(position, dtype=float), objectives))
        if self.cap is not None and len(self._entries) > self.cap:
            self._entries = _thin(self._entries, self.cap)
        return True


def update_archive(archive: ParetoArchive, entry: ArchiveEntry) -> ParetoArchive:
    archive.offer(entry.position, entry.objectives)
    return archive


def _thin(entries: list[ArchiveEntry], cap: int) -> list[ArchiveEntry]:
    """Farthest-point thinning ใน objective space: เก็บจุดปลายสองข้างไว้เสมอ"""
    points = np.array([e.objectives for e in entries], dtype=float)
    keep = [int(np.argmin(points[:, 0]))]
    second = int(np.argmin(points[:, 1]))
    if second not in keep:
        keep.append(second)
    dist = np.min([np.linalg.norm(points - points[k], axis=1) for k in keep], axis=0)
    while len(keep) < cap:
        idx = int(np.argmax(dist))
        keep.append(idx)
        dist = np.minimum(dist, np.linalg.norm(points - points[idx], axis=1))
    return [entries[i] for i in sorted(keep)]


def _knee_key(entry: ArchiveEntry) -> tuple[float, float, float]:
    of1, of2 = entry.objectives
    return (math.sqrt(of1 * of1 + of2 * of2), of1, of2)


def knee_selection(archive: ParetoArchive | Iterable[ArchiveEntry]) -> ArchiveEntry:
    """Entry ที่ใกล้ origin ที่สุด (Euclidean), เสมอกันเลือก of1 น้อยกว่า"""
    entries = list(archive)
    if not entries:
        raise EmptyArchiveError("Cannot select a knee from an empty archive")
    return min(entries, key=_knee_key)


# =====================================================================
# Decoding
# =====================================================================

def decode_arrays(positions: np.ndarray, n_materials: int) -> tuple[np.ndarray, np.ndarray]:
    """(B, 2n) → material ids (B, n) int, thicknesses (B, n) mm"""
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    n = positions.shape[1] // 2
    thick = positions[:, :n]
    ids = np.clip(np.floor(positions[:, n:] + 0.5), 1, n_materials).astype(int)
    return ids, thick


def decode_candidate(v: np.ndarray, db: MaterialDatabase) -> LayerStack:
    ids, thick = decode_arrays(v, len(db))
    return LayerStack.from_pairs(list(zip(ids[0].tolist(), thick[0].tolist())))


# =====================================================================
# Phases
# =====================================================================

def init_population(cfg: AbcConfig, rng: np.random.Generator, space: SearchSpace,
                    evaluate: BatchFn) -> list[FoodSource]:
    """x_ij = x_j^min + U(0,1) (x_j^max − x_j^min)"""
    u = rng.random((cfg.food_sources, space.dim))
    positions = space.lower + u * (space.upper - space.lower)
    objectives = evaluate(positions)
    return [FoodSource.evaluated(p, o) for p, o in zip(positions, objectives)]


def pick_scout(sources: Sequence[FoodSource], limit: int) -> int | None:
    """Source ที่ trials >= limit และ trials มากสุด (เสมอ: index ต่ำกว่า)"""
    best: int | None = None
    for i, source in enumerate(sources):
        if source.trials >= limit and (best is None or source.trials > sources[best].trials):
            best = i
    return best


def scout_phase(sources: Sequence[FoodSource], cfg: AbcConfig, rng: np.random.Generator,
                space: SearchSpace, evaluate: BatchFn) -> list[FoodSource]:
    """แทน source ที่ถูกทิ้งด้วย sample ใหม่: ไม่เกินหนึ่งตัวต่อ iteration"""
    sources = list(sources)
    index = pick_scout(sources, cfg.limit)
    if index is None:
        return sources
    u = rng.random(space.dim)
    position = space.lower + u * (space.upper - space.lower)
    (objectives,) = evaluate(position[None, :])
    sources[index] = FoodSource.evaluated(position, objectives)
    return sources


# =====================================================================
# Optimizer
# =====================================================================

@dataclass(frozen=True)
class DesignProblem:
    spec: FilterSpec
    db: MaterialDatabase
    space: SearchSpace

    @classmethod
    def build(cls, spec: FilterSpec, db: MaterialDatabase, n_layers: int,
              thickness: tuple[float, float] = (0.0, 3.0),
              materials: tuple[int, int] | None = None) -> "DesignProblem":
        materials = materials or (1, len(db))
        if not (1 <= materials[0] <= materials[1] <= len(db)):
            raise ConfigError(
                f"Material range {materials} must lie within database ids 1..{len(db)}"
            )
        return cls(spec, db, SearchSpace.for_layers(n_layers, thickness, materials))

    @property
    def n_layers(self) -> int:
        return self.space.n_layers


class HistoryRecord(NamedTuple):
    iteration: int
    archive_size: int
    knee: ObjectiveVector


@dataclass
class OptimizationResult:
    archive: ParetoArchive
    knee: ArchiveEntry
    history: list[HistoryRecord] = field(default_factory=list)
    evaluations: int = 0


class BeeColony:
    """หนึ่ง run ของ MO-ABC: state ทั้งหมด (sources, archive, rng) อยู่ใน instance"""

    def __init__(self, problem: DesignProblem, cfg: AbcConfig, evaluate: BatchFn):
        self.problem = problem
        self.cfg = cfg
        self.space = problem.space
        self.rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
        self.archive = ParetoArchive(cap=cfg.archive_cap)
        self.sources: list[FoodSource] = []
        self.evaluations = 0
        self._evaluate_batch = evaluate

    def _evaluate(self, positions: np.ndarray) -> list[ObjectiveVector]:
        self.evaluations += len(positions)
        return self._evaluate_batch(positions)

    def initialize(self):
        self.sources = init_population(self.cfg, self.rng, self.space, self._evaluate)
        for source in self.sources:
            self.archive.offer(source.position, source.objectives)

    def _partner(self, i: int) -> int:
        k = int(self.rng.integers(len(self.sources) - 1))
        return k + 1 if k >= i else k

    def _commit(self, targets: Sequence[int], candidates: Sequence[np.ndarray]):
        if not targets:
            return
        candidates = np.array(candidates)
        objectives = self._evaluate(candidates)
        for i, position, obj in zip(targets, candidates, objectives):
            self.archive.offer(position, obj)
            self.sources[i] = greedy_replace(self.sources[i], FoodSource.evaluated(position, obj),
                                             self.rng)

    def visit(self, targets: Sequence[int]):
        """หนึ่ง neighbor trial ต่อ target ตามลำดับ

        trial สร้างจาก self.sources ตอนสร้างจริง: target ที่ยังรอ commit อยู่ใน batch
        จะถูก commit ก่อน แล้วจึงสร้าง trial ใหม่จากตำแหน่งล่าสุด batch จึงมีแต่ target ไม่ซ้ำกัน
        """
        pending: list[int] = []
        rows: list[np.ndarray] = []
        for i in targets:
            if i in pending:
                self._commit(pending, rows)
                pending, rows = [], []
            k = self._partner(i)
            j = int(self.rng.integers(self.space.dim))
            rows.append(neighbor(self.sources[i].position, self.sources[k].position, j,
                                 self.rng, self.space))
            pending.append(i)
        self._commit(pending, rows)

    def employed_phase(self):
        self.visit(range(len(self.sources)))

    def onlooker_phase(self):
        probs = selection_probabilities([s.fitness for s in self.sources])
        targets = [int(t) for t in self.rng.choice(len(self.sources), size=len(self.sources), p=probs)]
        self.visit(targets)

    def scout_phase(self):
        index = pick_scout(self.sources, self.cfg.limit)
        self.sources = scout_phase(self.sources, self.cfg, self.rng, self.space, self._evaluate)
        if index is not None:
            scout = self.sources[index]
            self.archive.offer(scout.position, scout.objectives)

    def step(self):
        self.employed_phase()
        self.onlooker_phase()
        self.scout_phase()

    def record(self, iteration: int) -> HistoryRecord:
        knee = knee_selection(self.archive)
        return HistoryRecord(iteration, len(self.archive), knee.objectives)


def make_batch_evaluator(problem: DesignProblem, workers: int = 1) -> BatchEvaluator:
    evaluator = ObjectiveEvaluator(problem.db, problem.spec)
    n_materials = len(problem.db)

    def _evaluate_rows(rows: np.ndarray) -> list[ObjectiveVector]:
        ids, thick = decode_arrays(rows, n_materials)
        return evaluator.evaluate_arrays(ids, thick)

    return BatchEvaluator(_evaluate_rows, workers=workers)


def run_optimization(problem: DesignProblem, cfg: AbcConfig,
                     on_iteration: Callable[[int, BeeColony], None] | None = None) -> OptimizationResult:
    """Initialization แล้ววน employed → onlooker → scout จำนวน NI รอบ"""
    log.info(
        "MO-ABC start: %s filter, %d layers, NP=%d NI=%d limit=%d seed=%d",
        problem.spec.kind.value, problem.n_layers, cfg.colony_size, cfg.iterations,
        cfg.limit, cfg.seed,
    )
    with make_batch_evaluator(problem, cfg.workers) as batch:
        colony = BeeColony(problem, cfg, batch)
        colony.initialize()
        history = [colony.record(0)]
        if on_iteration:
            on_iteration(0, colony)

        every = max(1, cfg.iterations // 10)
        for iteration in range(1, cfg.iterations + 1):
            colony.step()
            history.append(colony.record(iteration))
            if on_iteration:
                on_iteration(iteration, colony)
            if iteration % every == 0:
                rec = history[-1]
                log.info("iter %d/%d: archive=%d knee=(%.4f, %.4f)", iteration, cfg.iterations,
                         rec.archive_size, rec.knee.of1, rec.knee.of2)

    knee = knee_selection(colony.archive)
    log.info("MO-ABC done: %d evaluations, archive=%d, knee=(%.4f, %.4f)",
             colony.evaluations, len(colony.archive), knee.objectives.of1, knee.objectives.of2)
    return OptimizationResult(colony.archive, knee, history, colony.evaluations)
