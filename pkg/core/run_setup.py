"""แปลง RunConfig เป็น object ที่ core ใช้: MaterialDatabase, FilterSpec, AbcConfig, DesignProblem"""

from __future__ import annotations

from core.config import RunConfig
from core.em_model import LayerStack
from core.errors import ConfigError
from core.materials import MaterialDatabase, builtin_database, load_database_file
from core.moabc import AbcConfig, DesignProblem
from core.objectives import FilterSpec, builtin_spec, filter_spec_from_bands


def load_materials(cfg: RunConfig) -> MaterialDatabase:
    if cfg.materials_file is None:
        return builtin_database()
    return load_database_file(cfg.materials_file)


def build_filter_spec(cfg: RunConfig) -> FilterSpec:
    """Band ที่ระบุเองชนะ built-in layout ของ --filter"""
    if cfg.pass_bands or cfg.stop_bands:
        if not (cfg.pass_bands and cfg.stop_bands):
            raise ConfigError("Explicit bands need both PASS_BANDS and STOP_BANDS")
        return filter_spec_from_bands(cfg.pass_bands, cfg.stop_bands, cfg.angles, cfg.freq_step)
    return builtin_spec(cfg.filter_kind, cfg.angles, cfg.freq_step)


def build_abc_config(cfg: RunConfig) -> AbcConfig:
    return AbcConfig(
        colony_size=cfg.colony_size,
        iterations=cfg.iterations,
        limit=cfg.limit,
        seed=cfg.seed,
        archive_cap=cfg.archive_cap,
        workers=cfg.workers,
    )


def build_problem(cfg: RunConfig, db: MaterialDatabase | None = None) -> DesignProblem:
    db = db or load_materials(cfg)
    return DesignProblem.build(
        build_filter_spec(cfg), db, cfg.layers, cfg.thickness_bounds, cfg.material_range
    )


def resolve_stack(cfg: RunConfig, db: MaterialDatabase) -> LayerStack:
    if cfg.stack is None:
        raise ConfigError("This command needs an explicit stack (--stack 'id:thick,...')")
    stack = LayerStack.parse(cfg.stack)
    stack.validate(db)
    return stack
