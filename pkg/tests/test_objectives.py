"""Test objectives: band layouts, grids, objective values, band statistics"""

import numpy as np
import pytest

from core.em_model import LayerStack, Polarization
from core.errors import ConfigError, DomainError
from core.objectives import (
    DB_FLOOR,
    BandRole,
    FilterKind,
    FilterSpec,
    ObjectiveEvaluator,
    band_grid,
    band_report,
    band_statistics,
    builtin_spec,
    evaluate_objectives,
    filter_spec_from_bands,
    to_db,
)

OBJECTIVE_TOL = 0.05
DB_TOL = 1.5


def test_band_grid_is_inclusive():
    grid = band_grid((2.0, 10.0), 0.2)
    assert grid.size == 41
    assert grid[0] == 2.0
    assert grid[-1] == 10.0
    np.testing.assert_allclose(np.diff(grid), 0.2)


def test_band_grid_drops_partial_step():
    grid = band_grid((2.0, 3.0), 0.3)
    np.testing.assert_allclose(grid, [2.0, 2.3, 2.6, 2.9])


def test_band_grid_errors():
    with pytest.raises(DomainError):
        band_grid((5.0, 4.0), 0.2)
    with pytest.raises(DomainError):
        band_grid((2.0, 4.0), 0.0)


def test_builtin_band_layouts():
    lp = builtin_spec("lp")
    assert lp.kind is FilterKind.LP
    assert lp.pass_bands == ((2.0, 10.0),)
    assert lp.stop_bands == ((10.0, 18.0),)
    hp = builtin_spec(FilterKind.HP)
    assert hp.pass_bands == ((10.0, 18.0),)
    bp = builtin_spec("BP")
    assert bp.stop_bands == ((2.0, 8.0), (12.0, 18.0))
    # stop band ของ BP รวมเป็น 62 จุด
    assert bp.grid(BandRole.STOP).size == 62
    assert bp.angles == (0.0, 15.0, 30.0, 45.0)


def test_unknown_filter_kind():
    with pytest.raises(ConfigError):
        builtin_spec("notch")


def test_overlapping_bands_rejected():
    with pytest.raises(ConfigError):
        filter_spec_from_bands([(2, 10)], [(9, 18)])
    # ขอบร่วมกันได้
    spec = filter_spec_from_bands([(2, 10)], [(10, 18)])
    assert spec.kind is FilterKind.CUSTOM


def test_spec_validation():
    with pytest.raises(ConfigError):
        FilterSpec(FilterKind.LP, (), ((10.0, 18.0),))
    with pytest.raises(ConfigError):
        FilterSpec(FilterKind.LP, ((2.0, 10.0),), ((10.0, 18.0),), angles=(0.0, 90.0))
    with pytest.raises(ConfigError):
        FilterSpec(FilterKind.LP, ((2.0, 10.0),), ((10.0, 18.0),), freq_step=0.0)


def test_to_db_reference_level_and_floor():
    assert to_db(0.316) == pytest.approx(-10.0, abs=0.01)
    assert to_db(1.0) == 0.0
    assert to_db(0.0) == pytest.approx(DB_FLOOR)


def test_empty_stack_objectives(db):
    # TR = 0 ทุกจุด → pass band สมบูรณ์, stop band แย่สุด
    of = evaluate_objectives(LayerStack(), db, builtin_spec("lp"))
    assert of.of1 == 0.0
    assert of.of2 == 1.0


def test_objectives_stay_in_unit_interval(db):
    rng = np.random.default_rng(3)
    evaluator = ObjectiveEvaluator(db, builtin_spec("bp"))
    ids = rng.integers(1, 17, size=(20, 5))
    thick = rng.uniform(0, 3, size=(20, 5))
    for of in evaluator.evaluate_arrays(ids, thick):
        assert 0.0 <= of.of1 <= 1.0
        assert 0.0 <= of.of2 <= 1.0


def test_evaluate_many_matches_single(db, lp_stack, hp_stack):
    evaluator = ObjectiveEvaluator(db, builtin_spec("lp"))
    batch = evaluator.evaluate_many([lp_stack, hp_stack])
    assert batch[0] == pytest.approx(evaluator.evaluate(lp_stack), abs=1e-14)
    assert batch[1] == pytest.approx(evaluator.evaluate(hp_stack), abs=1e-14)


def test_evaluate_many_requires_equal_layer_counts(db, lp_stack):
    evaluator = ObjectiveEvaluator(db, builtin_spec("lp"))
    with pytest.raises(ConfigError):
        evaluator.evaluate_many([lp_stack, LayerStack.from_pairs([(1, 1.0)])])


def test_lp_design_objectives(db, lp_stack):
    of = evaluate_objectives(lp_stack, db, builtin_spec("lp"))
    assert of.of1 == pytest.approx(0.2185, abs=OBJECTIVE_TOL)
    assert of.of2 == pytest.approx(0.2593, abs=OBJECTIVE_TOL)


def test_hp_design_objectives(db, hp_stack):
    # published HP pair is listed in (of2, of1) order
    of = evaluate_objectives(hp_stack, db, builtin_spec("hp"))
    assert of.of1 == pytest.approx(0.1972, abs=OBJECTIVE_TOL)
    assert of.of2 == pytest.approx(0.2855, abs=OBJECTIVE_TOL)


def test_bp_design_objectives(db, bp_stack):
    of = evaluate_objectives(bp_stack, db, builtin_spec("bp"))
    assert of.of1 == pytest.approx(0.1751, abs=OBJECTIVE_TOL)
    assert of.of2 == pytest.approx(0.1838, abs=OBJECTIVE_TOL)


@pytest.mark.parametrize("stack_name, kind, role, expected, max_tol", [
    ("lp_stack", "lp", BandRole.PASS, (-4.47, -14.86, -25.64), DB_TOL),
    ("lp_stack", "lp", BandRole.STOP, (-2.18, -2.36, -3.52), DB_TOL),
    ("hp_stack", "hp", BandRole.PASS, (-6.49, -17.89, -33.35), DB_TOL),
    # BP pass-band maximum: −5.12 vs −6.63 dB, edge-inclusive grid + rounded thicknesses
    ("bp_stack", "bp", BandRole.PASS, (-6.63, -16.04, -31.27), 2.0),
])
def test_design_band_statistics_te_normal(request, db, stack_name, kind, role, expected, max_tol):
    stack = request.getfixturevalue(stack_name)
    stats = band_statistics(stack, db, builtin_spec(kind), role, Polarization.TE, 0.0)
    assert stats.max_db == pytest.approx(expected[0], abs=max_tol)
    assert stats.avg_db == pytest.approx(expected[1], abs=DB_TOL)
    assert stats.min_db == pytest.approx(expected[2], abs=DB_TOL)
    assert stats.min_db <= stats.avg_db <= stats.max_db


def test_band_statistics_angle_must_be_on_grid(db, lp_stack):
    with pytest.raises(DomainError):
        band_statistics(lp_stack, db, builtin_spec("lp"), BandRole.PASS, Polarization.TE, 10.0)


def test_band_report_covers_every_combination(db, lp_stack):
    rows = band_report(lp_stack, db, builtin_spec("lp"))
    assert len(rows) == 2 * 2 * 4
    assert rows[0].role is BandRole.PASS and rows[0].pol is Polarization.TE
    redundant = [r for r in rows if r.redundant]
    assert len(redundant) == 2
    assert all(r.pol is Polarization.TM and r.angle == 0.0 for r in redundant)
    te0 = {r.role: r.stats for r in rows if r.pol is Polarization.TE and r.angle == 0.0}
    tm0 = {r.role: r.stats for r in rows if r.redundant}
    for role in BandRole:
        assert te0[role] == pytest.approx(tm0[role], abs=1e-9)
