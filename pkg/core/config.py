"""โหลด configuration จาก .env + run config file (flat KEY=VALUE)

Precedence: defaults < MMDF_WORKERS < config file < MMDF_OUTPUT_DIR (output dir เท่านั้น) < CLI flags
"""

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from core.errors import ConfigError

BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(BASE_DIR / ".env")


def _optional(key: str, default: str = "") -> str:
    return os.getenv(key, default)


def _flag(key: str, default: str) -> bool:
    return _optional(key, default).strip().lower() in ("true", "1", "yes")


# === Logging ===
LOG_LEVEL = _optional("MMDF_LOG_LEVEL", "INFO").strip().upper() or "INFO"
LOG_TO_FILE = _flag("MMDF_LOG_TO_FILE", "true")
LOG_DIR = Path(_optional("MMDF_LOG_DIR", "") or BASE_DIR / "logs")
if LOG_TO_FILE:
    LOG_DIR.mkdir(parents=True, exist_ok=True)

# === Output ===
# อ่านตอน resolve ไม่ใช่ตอน import เพื่อให้ test ใช้ monkeypatch.setenv ได้
OUTPUT_DIR_ENV = "MMDF_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = Path("out")

# === Evaluation ===
# อ่านตอน resolve เช่นกัน: ค่าผิดรูปแบบต้องออกเป็น ConfigError (exit 2)
WORKERS_ENV = "MMDF_WORKERS"

# === Templates ===
TEMPLATE_HOT_RELOAD = _flag("MMDF_TEMPLATE_HOT_RELOAD", "false")


Band = tuple[float, float]


@dataclass(frozen=True)
class RunConfig:
    """ทุกอย่างที่ subcommand ต้องใช้: default ตรงกับ setup มาตรฐาน (5 ชั้น, 0-3 mm, NP=100)"""

    filter_kind: str = "lp"
    pass_bands: tuple[Band, ...] | None = None
    stop_bands: tuple[Band, ...] | None = None
    layers: int = 5
    thickness_bounds: tuple[float, float] = (0.0, 3.0)
    material_range: tuple[int, int] | None = None  # None = ทั้ง database
    angles: tuple[float, ...] = (0.0, 15.0, 30.0, 45.0)
    freq_step: float = 0.2
    freq_range: tuple[float, float] = (2.0, 18.0)
    colony_size: int = 100
    iterations: int = 1000
    limit: int = 100
    seed: int = 0
    archive_cap: int | None = None
    output_dir: Path = DEFAULT_OUTPUT_DIR
    materials_file: Path | None = None
    stack: str | None = None
    workers: int = 1

    def with_overrides(self, **overrides) -> "RunConfig":
        """คืน copy ที่แทนค่าเฉพาะ key ที่ไม่ใช่ None"""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"Unknown RunConfig field(s): {sorted(unknown)}")
        picked = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **picked) if picked else self


# =====================================================================
# Value parsers (ใช้ทั้ง config file และ CLI flags)
# =====================================================================

def parse_bands(text: str) -> tuple[Band, ...]:
    """'2-8,12-18' → ((2.0, 8.0), (12.0, 18.0))"""
    bands: list[Band] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition("-")
        if not sep:
            raise ConfigError(f"Band must look like 'lo-hi', got {chunk!r}")
        try:
            band = (float(lo), float(hi))
        except ValueError as e:
            raise ConfigError(f"Band bounds must be numbers, got {chunk!r}") from e
        if band[0] > band[1]:
            raise ConfigError(f"Band lower edge exceeds upper edge: {chunk!r}")
        bands.append(band)
    if not bands:
        raise ConfigError(f"No bands found in {text!r}")
    return tuple(bands)


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as e:
        raise ConfigError(f"Expected a comma-separated list of numbers, got {text!r}") from e
    if not values:
        raise ConfigError("Expected at least one number")
    return values


def _as_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError as e:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from e


def _as_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError as e:
        raise ConfigError(f"{key} must be a number, got {value!r}") from e


# key ใน config file → (field, parser); *_MIN/*_MAX รวมเป็น tuple ทีหลัง
_SCALAR_KEYS = {
    "FILTER": ("filter_kind", lambda k, v: v.strip().lower()),
    "PASS_BANDS": ("pass_bands", lambda k, v: parse_bands(v)),
    "STOP_BANDS": ("stop_bands", lambda k, v: parse_bands(v)),
    "LAYERS": ("layers", _as_int),
    "ANGLES": ("angles", lambda k, v: parse_float_list(v)),
    "FREQ_STEP": ("freq_step", _as_float),
    "NP": ("colony_size", _as_int),
    "NI": ("iterations", _as_int),
    "LIMIT": ("limit", _as_int),
    "SEED": ("seed", _as_int),
    "ARCHIVE_CAP": ("archive_cap", _as_int),
    "OUTPUT_DIR": ("output_dir", lambda k, v: Path(v)),
    "MATERIALS_FILE": ("materials_file", lambda k, v: Path(v)),
    "STACK": ("stack", lambda k, v: v.strip()),
    "WORKERS": ("workers", _as_int),
}
_PAIR_KEYS = {
    "THICKNESS": ("thickness_bounds", _as_float),
    "MATERIAL": ("material_range", _as_int),
    "FREQ": ("freq_range", _as_float),
}
CONFIG_KEYS = sorted(
    list(_SCALAR_KEYS) + [f"{p}_{s}" for p in _PAIR_KEYS for s in ("MIN", "MAX")]
)


def read_config_file(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    """Parse run config file (KEY=VALUE, # comments) ด้วย dotenv_values"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    raw = dotenv_values(path)
    cfg = base or RunConfig()

    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"Unknown config key(s) in {path}: {', '.join(unknown)}")

    values: dict = {}
    for key, value in raw.items():
        if value is None or not value.strip():
            continue
        if key in _SCALAR_KEYS:
            field_name, parser = _SCALAR_KEYS[key]
            values[field_name] = parser(key, value)

    for prefix, (field_name, parser) in _PAIR_KEYS.items():
        lo_raw, hi_raw = raw.get(f"{prefix}_MIN"), raw.get(f"{prefix}_MAX")
        if not lo_raw and not hi_raw:
            continue
        current = getattr(cfg, field_name)
        if current is None:
            if not (lo_raw and hi_raw):
                raise ConfigError(f"{prefix}_MIN and {prefix}_MAX must be given together")
            current = (None, None)
        lo = parser(f"{prefix}_MIN", lo_raw) if lo_raw else current[0]
        hi = parser(f"{prefix}_MAX", hi_raw) if hi_raw else current[1]
        values[field_name] = (lo, hi)

    # path ใน config file นับจาก directory ของ config file
    materials_file = values.get("materials_file")
    if materials_file is not None and not materials_file.is_absolute():
        values["materials_file"] = path.parent / materials_file

    return cfg.with_overrides(**values)


def resolve_run_config(config_path: str | Path | None = None, **cli_overrides) -> RunConfig:
    """รวม defaults, config file, env MMDF_OUTPUT_DIR และ CLI flags ตามลำดับ"""
    cfg = RunConfig()
    env_workers = _optional(WORKERS_ENV, "").strip()
    if env_workers:
        # MMDF_WORKERS เป็น default ของ process: config file และ flag ทับได้
        cfg = cfg.with_overrides(workers=_as_int(WORKERS_ENV, env_workers))
    if config_path:
        cfg = read_config_file(config_path, cfg)

    env_out = _optional(OUTPUT_DIR_ENV, "").strip()
    if env_out:
        cfg = cfg.with_overrides(output_dir=Path(env_out))

    return cfg.with_overrides(**cli_overrides)
