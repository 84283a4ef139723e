"""Shared pytest fixtures for the MMDF designer tests."""

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
# ไม่เขียน log file ระหว่างเทสต์: ต้องตั้งก่อน import core.config
os.environ.setdefault("MMDF_LOG_TO_FILE", "false")


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run full-scale optimizer attainment tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale optimizer runs (enable with --run-slow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# stacks ของ design ตัวอย่าง (material id, thickness mm)
LP_STACK = ((9, 0.7118), (8, 3.0), (2, 0.9224), (8, 3.0), (1, 1.4457))
HP_STACK = ((1, 0.2818), (7, 1.7758), (8, 0.2753), (1, 2.08), (13, 1.1107))
BP_STACK = ((1, 1.5615), (6, 0.3311), (1, 0.7746), (2, 0.9427), (1, 2.5793))


def stack_arg(pairs) -> str:
    return ",".join(f"{m}:{d}" for m, d in pairs)


@pytest.fixture
def stack_text():
    """stack ของ design ตัวอย่างในรูป --stack"""
    return {"lp": stack_arg(LP_STACK), "hp": stack_arg(HP_STACK), "bp": stack_arg(BP_STACK)}


@pytest.fixture
def db():
    from core.materials import builtin_database
    return builtin_database()


@pytest.fixture
def lp_stack():
    from core.em_model import LayerStack
    return LayerStack.from_pairs(LP_STACK)


@pytest.fixture
def hp_stack():
    from core.em_model import LayerStack
    return LayerStack.from_pairs(HP_STACK)


@pytest.fixture
def bp_stack():
    from core.em_model import LayerStack
    return LayerStack.from_pairs(BP_STACK)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """กัน env ของเครื่องรั่วเข้า resolve_run_config"""
    monkeypatch.delenv("MMDF_OUTPUT_DIR", raising=False)
    from core import template_loader
    template_loader._cache.clear()
    yield
    template_loader._cache.clear()
