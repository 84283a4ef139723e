"""Test reference: oracles ต้องตรงกับ recursion และ archive ต้องตรงกับ brute force"""

import numpy as np
import pytest

from core import em_model
from core.em_model import LayerStack, PlaneWave, Polarization
from core.errors import ConfigError
from core.reference import (
    SUITE_NAMES,
    airy_single_layer,
    archive_front,
    brute_force_pareto,
    run_oracle_suites,
    tmm_total_reflection,
)


@pytest.mark.parametrize("pol", list(Polarization))
@pytest.mark.parametrize("theta", [0.0, 15.0, 30.0, 45.0])
def test_tmm_matches_recursion_on_design_stacks(db, lp_stack, bp_stack, pol, theta):
    for stack in (lp_stack, bp_stack):
        for f in (2.0, 10.0, 17.6):
            wave = PlaneWave(f, theta, pol)
            diff = em_model.total_reflection(stack, db, wave) - tmm_total_reflection(stack, db, wave)
            assert abs(diff) < 1e-9


def test_tmm_empty_stack_is_zero(db):
    assert abs(tmm_total_reflection(LayerStack(), db, PlaneWave(5.0, 30.0, Polarization.TE))) < 1e-15


def test_airy_matches_single_layer_recursion(db):
    for material_id in (1, 3, 9, 14):
        stack = LayerStack.from_pairs([(material_id, 1.3)])
        for pol in Polarization:
            wave = PlaneWave(8.0, 30.0, pol)
            c = db.constitutives(material_id, wave.f)
            closed = airy_single_layer(c.eps_r, c.mu_r, 1.3, wave)
            assert abs(em_model.total_reflection(stack, db, wave) - closed) < 1e-12


def test_brute_force_pareto_example():
    front = brute_force_pareto([(0, 1), (1, 0), (1, 1)])
    assert set(front) == {(0.0, 1.0), (1.0, 0.0)}


def test_brute_force_pareto_keeps_duplicates_once():
    assert brute_force_pareto([(0.5, 0.5), (0.5, 0.5)]) == [(0.5, 0.5)]
    assert brute_force_pareto([]) == []


def test_archive_equals_brute_force_on_shuffled_sets():
    rng = np.random.default_rng(21)
    for _ in range(20):
        points = rng.random((150, 2))
        expected = set(brute_force_pareto(points))
        assert set(archive_front(points[rng.permutation(150)])) == expected


def test_all_suites_pass_on_small_sizes(db):
    results = run_oracle_suites(db, seed=3, n_stacks=20, n_pareto_sets=5, n_pareto_points=100)
    assert [r.name for r in results] == list(SUITE_NAMES)
    for r in results:
        assert r.passed, f"{r.name}: {r.max_deviation} > {r.tolerance}"
        assert r.cases > 0


def test_suite_selection(db):
    results = run_oracle_suites(db, n_stacks=5, suites=["pareto", "airy"])
    assert [r.name for r in results] == ["pareto", "airy"]


def test_suite_arguments_validated(db):
    with pytest.raises(ConfigError):
        run_oracle_suites(db, suites=["fdtd"])
    with pytest.raises(ConfigError):
        run_oracle_suites(db, n_stacks=0)


def test_tmm_suite_catches_broken_recursion(db, monkeypatch):
    original = em_model.total_reflection

    def sign_flipped_tm(stack, db_, wave):
        tr = original(stack, db_, wave)
        return -tr if Polarization(wave.pol) is Polarization.TM else tr

    monkeypatch.setattr(em_model, "total_reflection", sign_flipped_tm)
    (result,) = run_oracle_suites(db, n_stacks=10, suites=["tmm"])
    assert not result.passed
    assert result.max_deviation > 1e-3
