import math

import numpy as np
import pytest

from relaycoil.network import s21
from relaycoil.sweep import (
    DEFAULT_OD_LIST,
    Heatmap,
    MeasurementSeries,
    compare_with_measurement,
    default_location_grid,
    find_equal_coupling_location,
    find_max_s21_location,
    golden_section_max,
    location_sweep,
    optimal_size_scan,
    optimum_for_od,
    size_location_heatmap,
    spiral_couplings,
    step_grid,
)

OD_MM = [round(od * 1e3) for od in DEFAULT_OD_LIST]


def test_default_axes():
    assert OD_MM == list(range(30, 201, 10))
    assert len(DEFAULT_OD_LIST) == 18
    grid = default_location_grid(0.150)
    assert grid.size == 31
    # 31 points cannot sit on a 5 mm step without touching the coils, so the
    # grid keeps 31 points and 2.5 mm clearances at both ends
    assert grid[0] == pytest.approx(2.5e-3) and grid[-1] == pytest.approx(147.5e-3)
    np.testing.assert_allclose(np.diff(grid), 145e-3 / 30, rtol=1e-12)
    assert grid[15] == pytest.approx(0.075, abs=1e-15)
    np.testing.assert_allclose(grid + grid[::-1], 0.150, rtol=1e-15)


def test_step_grid():
    np.testing.assert_allclose(step_grid(0.005, 0.145, 0.005), np.arange(1, 30) * 0.005, rtol=1e-12)
    with pytest.raises(ValueError):
        step_grid(0.0, 1.0, 0.0)


def test_one_point_sweep_equals_direct_call(sym):
    [(loc, mag)] = location_sweep(sym, locations=[0.042])
    assert mag == s21(sym.with_ic(d_txc_ic=0.042)).s21_mag


def test_sweep_rejects_bad_interval(sym):
    with pytest.raises(ValueError):
        location_sweep(sym, loc_lo=0.0, loc_hi=0.1)
    with pytest.raises(ValueError):
        location_sweep(sym, locations=[])


def test_sweep_marks_failed_points(sym, monkeypatch):
    import relaycoil.sweep as sw

    real = sw._s21_mag

    def flaky(system, loc, zero_coupling=False):
        if abs(loc - 0.05) < 1e-9:
            raise ArithmeticError("forced")
        return real(system, loc, zero_coupling)

    monkeypatch.setattr(sw, "_s21_mag", flaky)
    out = location_sweep(sym, locations=[0.04, 0.05, 0.06])
    assert len(out) == 3 and math.isnan(out[1][1]) and not math.isnan(out[0][1])
    monkeypatch.setattr(sw, "_s21_mag", lambda *a, **k: (_ for _ in ()).throw(ArithmeticError("x")))
    with pytest.raises(RuntimeError):
        location_sweep(sym, locations=[0.04, 0.05])


@pytest.mark.parametrize("od", [0.05, 0.12, 0.2])
def test_sweep_palindromic(sym, od):
    vals = np.array([v for _, v in location_sweep(sym, od, step=5e-3)])
    np.testing.assert_allclose(vals, vals[::-1], rtol=1e-9)


@pytest.mark.parametrize("od_mm", OD_MM)
def test_symmetric_sweep_argmax_at_center(sym, od_mm):
    sweep = location_sweep(sym, od_mm * 1e-3, step=5e-3)
    locs = np.array([x for x, _ in sweep])
    vals = np.array([v for _, v in sweep])
    # the grid is palindromic, so accept either member of a tie
    assert abs(locs[np.argmax(vals)] - 0.075) <= 5e-3 + 1e-12


def test_heatmap_single_cell(sym):
    hm = size_location_heatmap(sym, [0.08], [0.03])
    assert hm.values.shape == (1, 1)
    assert hm.values[0, 0] == s21(sym.with_ic(sym.ic.coil.__class__(0.08, 7, sym.ic.coil.pitch_p, sym.ic.coil.wire), 0.03)).s21_mag


def test_heatmap_rows_palindromic_and_ordered(sym):
    ods = [0.15, 0.06, 0.1]
    hm = size_location_heatmap(sym, ods, threads=3)
    assert list(hm.od_axis) == ods
    np.testing.assert_allclose(hm.values, hm.values[:, ::-1], rtol=1e-9)
    serial = size_location_heatmap(sym, ods)
    np.testing.assert_array_equal(hm.values, serial.values)
    assert np.all((hm.values >= 0) & (hm.values <= 1))


def test_heatmap_invariants():
    with pytest.raises(ValueError):
        Heatmap(np.array([0.1]), np.array([0.05, 0.06]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        Heatmap(np.array([0.1]), np.array([0.05]), np.array([[1.5]]))


@pytest.mark.parametrize("od_mm", [30, 90, 200])
def test_equal_coupling_symmetric(sym, od_mm):
    loc = find_equal_coupling_location(sym, od_mm * 1e-3)
    assert loc == pytest.approx(0.075, abs=1e-5)
    k_tx, k_rx = spiral_couplings(sym.with_ic(ic=sym.ic.coil.__class__(od_mm * 1e-3, 7, sym.ic.coil.pitch_p, sym.ic.coil.wire)), loc)
    assert k_tx == pytest.approx(k_rx, rel=1e-3)


@pytest.mark.parametrize("od_mm", [30, 100, 200])
def test_equal_coupling_asymmetric_nearer_rx(asym, od_mm):
    assert find_equal_coupling_location(asym, od_mm * 1e-3) > 0.075


def test_equal_coupling_requires_sign_change(sym):
    with pytest.raises(ValueError):
        find_equal_coupling_location(sym, 0.1, lo=0.01, hi=0.07)


def test_golden_section_on_parabola():
    x, v = golden_section_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, 1e-8)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert v == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("od_mm", [60, 150])
def test_refinement_not_worse_than_coarse(asym, od_mm):
    od = od_mm * 1e-3
    loc, val = find_max_s21_location(asym, od, coarse_step=5e-3)
    coarse = max(v for _, v in location_sweep(asym, od, step=5e-3))
    assert val >= coarse
    assert 0 < loc < asym.d_txc_rxc


def test_symmetric_max_location_large_ic(sym):
    rep = optimum_for_od(sym, 0.12)
    assert rep.loc_max_s21 == pytest.approx(0.075, abs=1e-4)
    assert abs(rep.loc_max_s21 - rep.loc_equal_coupling) < 1e-4


def test_size_scan_needs_three_ods(sym):
    with pytest.raises(ValueError):
        optimal_size_scan(sym, [0.1, 0.2])


def test_size_scan_interior_peak(sym):
    od_star, reports = optimal_size_scan(sym, [0.03, 0.1, 0.16, 0.2])
    assert len(reports) == 4
    vals = [r.s21_at_max for r in reports]
    assert od_star not in (0.03, 0.2)
    assert max(vals) > vals[0] and max(vals) > vals[-1]


def _synthetic_heatmap(sym):
    return size_location_heatmap(sym, [0.06, 0.1, 0.14])


def test_self_comparison_zero(sym):
    hm = _synthetic_heatmap(sym)
    rep = compare_with_measurement(hm, MeasurementSeries.from_heatmap(hm))
    assert len(rep.rows) == 3
    assert rep.mean_location_delta == 0 and rep.max_abs_location_delta == 0
    assert rep.rms_s21_delta == 0
    np.testing.assert_array_equal(rep.sample_deltas, 0)


def test_offset_comparison(sym):
    hm = _synthetic_heatmap(sym)
    m = MeasurementSeries.from_heatmap(hm)
    shifted = MeasurementSeries(m.ic_od, m.location + 0.010, m.s21_mag)
    rep = compare_with_measurement(hm, shifted)
    assert rep.mean_location_delta == pytest.approx(0.010, abs=1e-12)
    assert rep.mean_abs_location_pct == pytest.approx(100 * 0.010 / 0.150)


def test_comparison_against_reports(sym):
    _, reports = optimal_size_scan(sym, [0.08, 0.1, 0.12])
    meas = MeasurementSeries([r.ic_od for r in reports], [r.loc_max_s21 + 0.002 for r in reports], [0.5] * 3)
    rep = compare_with_measurement(reports, meas)
    assert rep.mean_location_delta == pytest.approx(0.002, abs=1e-12)


def test_comparison_without_overlap(sym):
    hm = size_location_heatmap(sym, [0.1], [0.05, 0.075])
    with pytest.raises(ValueError):
        compare_with_measurement(hm, MeasurementSeries([0.3], [0.05], [0.5]))


def test_measurement_invariants():
    with pytest.raises(ValueError):
        MeasurementSeries([0.1], [0.05], [1.2])
    with pytest.raises(ValueError):
        MeasurementSeries([0.1, 0.2], [0.05], [0.3])
    with pytest.raises(ValueError):
        MeasurementSeries([0.1], [0.16], [0.3]).check_span(0.15)
