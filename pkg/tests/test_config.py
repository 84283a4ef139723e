"""Test config: config file parsing, precedence, value parsers"""

from pathlib import Path

import pytest

from core.config import (
    CONFIG_KEYS,
    RunConfig,
    parse_bands,
    parse_float_list,
    read_config_file,
    resolve_run_config,
)
from core.errors import ConfigError


def _write(tmp_path, text, name="run.env"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults_match_standard_setup():
    cfg = RunConfig()
    assert cfg.filter_kind == "lp"
    assert cfg.layers == 5
    assert cfg.thickness_bounds == (0.0, 3.0)
    assert cfg.angles == (0.0, 15.0, 30.0, 45.0)
    assert cfg.freq_step == 0.2
    assert (cfg.colony_size, cfg.iterations, cfg.limit) == (100, 1000, 100)


def test_parse_bands():
    assert parse_bands("2-8, 12-18") == ((2.0, 8.0), (12.0, 18.0))
    assert parse_bands("8.5-12") == ((8.5, 12.0),)
    for bad in ("", "8", "a-b", "12-8"):
        with pytest.raises(ConfigError):
            parse_bands(bad)


def test_parse_float_list():
    assert parse_float_list("0, 15,30") == (0.0, 15.0, 30.0)
    with pytest.raises(ConfigError):
        parse_float_list("0,x")
    with pytest.raises(ConfigError):
        parse_float_list(" , ")


def test_read_config_file_all_kinds_of_keys(tmp_path):
    path = _write(tmp_path, (
        "# BP run\n"
        "FILTER=BP\n"
        "LAYERS=7\n"
        "ANGLES=0,30\n"
        "NP=40\n"
        "NI=25\n"
        "SEED=9\n"
        "THICKNESS_MAX=2.5\n"
        "MATERIAL_MIN=1\n"
        "MATERIAL_MAX=8\n"
        "STACK=1:1.0,2:0.5\n"
    ))
    cfg = read_config_file(path)
    assert cfg.filter_kind == "bp"
    assert cfg.layers == 7
    assert cfg.angles == (0.0, 30.0)
    assert (cfg.colony_size, cfg.iterations, cfg.seed) == (40, 25, 9)
    assert cfg.thickness_bounds == (0.0, 2.5)
    assert cfg.material_range == (1, 8)
    assert cfg.stack == "1:1.0,2:0.5"


def test_materials_file_relative_to_config(tmp_path):
    (tmp_path / "conf").mkdir()
    path = _write(tmp_path / "conf", "MATERIALS_FILE=mats.csv\n")
    assert read_config_file(path).materials_file == tmp_path / "conf" / "mats.csv"


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="COLONY"):
        read_config_file(_write(tmp_path, "COLONY=10\n"))


def test_bad_values_rejected(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(_write(tmp_path, "NP=many\n"))
    with pytest.raises(ConfigError):
        read_config_file(_write(tmp_path, "MATERIAL_MIN=2\n", "half.env"))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "absent.env")


def test_precedence_defaults_file_env_cli(tmp_path, monkeypatch):
    path = _write(tmp_path, "SEED=5\nOUTPUT_DIR=from_file\nNI=30\n")
    cfg = resolve_run_config(path)
    assert cfg.seed == 5
    assert cfg.output_dir == Path("from_file")

    monkeypatch.setenv("MMDF_OUTPUT_DIR", str(tmp_path / "from_env"))
    cfg = resolve_run_config(path)
    assert cfg.output_dir == tmp_path / "from_env"

    cfg = resolve_run_config(path, output_dir=tmp_path / "from_cli", seed=None, iterations=3)
    assert cfg.output_dir == tmp_path / "from_cli"
    assert cfg.seed == 5
    assert cfg.iterations == 3


def test_with_overrides_rejects_unknown_field():
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(colony=10)


def test_config_keys_cover_pairs():
    assert "THICKNESS_MIN" in CONFIG_KEYS
    assert "FREQ_MAX" in CONFIG_KEYS
    assert "FILTER" in CONFIG_KEYS


def test_shipped_configs_resolve():
    from core.materials import builtin_database, load_database_file
    from core.run_setup import build_filter_spec, build_problem

    configs = Path(__file__).resolve().parent.parent / "configs"
    bp = read_config_file(configs / "bp_filter.env")
    assert build_filter_spec(bp).stop_bands == ((2.0, 8.0), (12.0, 18.0))

    custom = read_config_file(configs / "custom_bands.env")
    problem = build_problem(custom)
    assert problem.n_layers == 4
    assert problem.spec.kind.value == "CUSTOM"

    shipped = load_database_file(configs / "materials.csv")
    builtin = builtin_database()
    for material_id in builtin.ids:
        assert shipped.get(material_id) == builtin.get(material_id)


def test_workers_env_is_process_default(tmp_path, monkeypatch):
    monkeypatch.setenv("MMDF_WORKERS", "3")
    assert resolve_run_config().workers == 3
    assert resolve_run_config(_write(tmp_path, "WORKERS=2\n")).workers == 2
    assert resolve_run_config(workers=5).workers == 5


def test_malformed_workers_env_rejected(monkeypatch):
    monkeypatch.setenv("MMDF_WORKERS", "2.5")
    with pytest.raises(ConfigError, match="MMDF_WORKERS"):
        resolve_run_config()
