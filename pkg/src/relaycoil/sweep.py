"""
Intermediate-coil placement and sizing studies.

Location sweeps, OD x location heatmaps of |S21| at the design frequency,
the equal-coupling locator, the max-|S21| locator (coarse scan plus
golden-section refinement) and comparison against measured data.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import bisect

from .electromagnetics import coupling_coefficient, mutual_inductance
from .geometry import SpiralCoil
from .network import SystemConfig, s21

LOCATION_TOL = 1e-5  # 0.01 mm
DEFAULT_COARSE_STEP = 5e-3
DEFAULT_OD_LIST = tuple(od * 1e-3 for od in range(30, 201, 10))
DEFAULT_LOC_START = 2.5e-3
DEFAULT_LOC_STOP = 147.5e-3
DEFAULT_LOC_POINTS = 31

_INV_PHI = (math.sqrt(5) - 1) / 2
_INV_PHI2 = (3 - math.sqrt(5)) / 2

_NUMERIC_ERRORS = (ArithmeticError, ValueError, np.linalg.LinAlgError)


def default_location_grid(span: float = 0.150, n: int = DEFAULT_LOC_POINTS) -> np.ndarray:
    """``n`` evenly spaced IC locations, symmetric about ``span/2``, ``span/60`` in from each end."""
    margin = span / 60
    return np.linspace(margin, span - margin, n)


def step_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """``lo, lo+step, ...`` up to and including ``hi`` (to rounding)."""
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"empty grid: hi={hi} < lo={lo}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def _ic_variant(sys: SystemConfig, od: Optional[float]) -> Optional[SpiralCoil]:
    if od is None:
        return None
    template = sys.ic.coil
    if not isinstance(template, SpiralCoil):
        raise TypeError("intermediate coil must be a SpiralCoil")
    return dataclasses.replace(template, od=od)


def _resolve_ic(sys: SystemConfig, ic: Union[SpiralCoil, float, None]) -> SystemConfig:
    if ic is None:
        return sys
    if isinstance(ic, SpiralCoil):
        return sys.with_ic(ic=ic)
    return sys.with_ic(ic=_ic_variant(sys, float(ic)))


def _s21_mag(sys: SystemConfig, loc: float, zero_coupling: bool = False) -> float:
    return s21(sys.with_ic(d_txc_ic=loc), zero_coupling=zero_coupling).s21_mag


def location_sweep(
    sys: SystemConfig,
    ic: Union[SpiralCoil, float, None] = None,
    loc_lo: Optional[float] = None,
    loc_hi: Optional[float] = None,
    step: float = DEFAULT_COARSE_STEP,
    locations: Optional[Sequence[float]] = None,
    zero_coupling: bool = False,
) -> list[tuple[float, float]]:
    """
    |S21| at f0 as the IC moves between the TX and RX spirals.

    Either give an explicit ``locations`` sequence or ``loc_lo``, ``loc_hi``
    and ``step``. ``ic`` may be a coil, an outer diameter (other winding
    parameters copied from ``sys.ic``) or None to keep ``sys.ic``.
    Failed points come back as NaN.
    """
    sys = _resolve_ic(sys, ic)
    span = sys.d_txc_rxc
    if locations is None:
        lo = step if loc_lo is None else loc_lo
        hi = span - step if loc_hi is None else loc_hi
        if not 0 < lo <= hi < span:
            raise ValueError(f"sweep interval [{lo}, {hi}] must lie inside (0, {span})")
        locations = step_grid(lo, hi, step)
    locations = [float(x) for x in locations]
    if not locations:
        raise ValueError("empty location grid")
    out = []
    for loc in locations:
        try:
            out.append((loc, _s21_mag(sys, loc, zero_coupling)))
        except _NUMERIC_ERRORS:
            out.append((loc, math.nan))
    if all(math.isnan(v) for _, v in out):
        raise RuntimeError("every point of the location sweep failed")
    return out


@dataclass
class Heatmap:
    """|S21| over IC outer diameter (rows) by TX-IC separation (columns)."""

    od_axis: np.ndarray
    loc_axis: np.ndarray
    values: np.ndarray
    span: float = 0.150
    errors: dict = field(default_factory=dict)

    def __post_init__(self):
        self.od_axis = np.asarray(self.od_axis, dtype=float)
        self.loc_axis = np.asarray(self.loc_axis, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.od_axis.size, self.loc_axis.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.od_axis.size}, {self.loc_axis.size})"
            )
        finite = self.values[np.isfinite(self.values)]
        if finite.size and (finite.min() < 0 or finite.max() > 1 + 1e-9):
            raise ValueError("heatmap |S21| values must lie in [0, 1]")

    def row_argmax(self) -> np.ndarray:
        """Location of the largest value in each row (NaN rows give NaN)."""
        out = np.full(self.od_axis.size, np.nan)
        for i, row in enumerate(self.values):
            if np.isfinite(row).any():
                out[i] = self.loc_axis[int(np.nanargmax(row))]
        return out


def _heatmap_row(sys: SystemConfig, od: float, locs: np.ndarray, zero_coupling: bool):
    row = np.full(locs.size, np.nan)
    errors = {}
    try:
        sys_od = sys.with_ic(ic=_ic_variant(sys, od))
    except _NUMERIC_ERRORS as exc:
        return row, {(od, float(loc)): str(exc) for loc in locs}
    for j, loc in enumerate(locs):
        try:
            row[j] = _s21_mag(sys_od, float(loc), zero_coupling)
        except _NUMERIC_ERRORS as exc:
            errors[(od, float(loc))] = str(exc)
    return row, errors


def _map(fn: Callable, items: Sequence, threads: Optional[int]):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def size_location_heatmap(
    sys: SystemConfig,
    od_list: Sequence[float] = DEFAULT_OD_LIST,
    locations: Optional[Sequence[float]] = None,
    threads: Optional[int] = None,
    zero_coupling: bool = False,
) -> Heatmap:
    """
    |S21| at f0 for every (IC OD, location) pair.

    Rows follow ``od_list``; columns default to ``default_location_grid``.
    Failed cells hold NaN and their messages are collected in ``errors``.
    """
    if len(od_list) == 0:
        raise ValueError("od_list is empty")
    locs = default_location_grid(sys.d_txc_rxc) if locations is None else np.asarray(locations, float)
    if locs.size == 0:
        raise ValueError("empty location grid")
    rows = _map(lambda od: _heatmap_row(sys, float(od), locs, zero_coupling), list(od_list), threads)
    errors = {}
    for _, err in rows:
        errors.update(err)
    values = np.vstack([r for r, _ in rows])
    return Heatmap(np.asarray(od_list, float), locs, values, span=sys.d_txc_rxc, errors=errors)


def spiral_couplings(sys: SystemConfig, loc: float) -> tuple[float, float]:
    """(k_TXC-IC, k_RXC-IC) with the IC at ``loc``; loops do not enter."""
    mu = sys.constants
    m_tx = mutual_inductance(sys.txc.radii, sys.ic.radii, loc, mu)
    m_rx = mutual_inductance(sys.ic.radii, sys.rxc.radii, sys.d_txc_rxc - loc, mu)
    return (
        coupling_coefficient(m_tx, sys.txc.self_l, sys.ic.self_l),
        coupling_coefficient(m_rx, sys.rxc.self_l, sys.ic.self_l),
    )


def find_equal_coupling_location(
    sys: SystemConfig,
    ic: Union[SpiralCoil, float, None] = None,
    lo: Optional[float] = None,
    hi: Optional[float] = None,
    tol: float = LOCATION_TOL,
) -> float:
    """
    IC location where ``k_TXC-IC == k_RXC-IC``, by bisection to ``tol``.

    The default bracket is the central 98% of the TX-RX span.
    """
    sys = _resolve_ic(sys, ic)
    span = sys.d_txc_rxc
    lo = 0.01 * span if lo is None else lo
    hi = 0.99 * span if hi is None else hi

    def gap(d):
        k_tx, k_rx = spiral_couplings(sys, d)
        return k_tx - k_rx

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if np.sign(g_lo) == np.sign(g_hi):
        raise ValueError(f"coupling difference does not change sign on [{lo}, {hi}]")
    return bisect(gap, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = LOCATION_TOL):
    """
    Maximise a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the better of the two final interior points,
    with the bracket narrowed to at most ``tol``.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc, yd = f(c), f(d)
    while h > tol:
        if yc > yd:
            b, d, yd = d, c, yc
            h = _INV_PHI * h
            c = a + _INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = _INV_PHI * h
            d = a + _INV_PHI * h
            yd = f(d)
    return (c, yc) if yc > yd else (d, yd)


def find_max_s21_location(
    sys: SystemConfig,
    ic: Union[SpiralCoil, float, None] = None,
    coarse_step: float = DEFAULT_COARSE_STEP,
    tol: float = LOCATION_TOL,
    zero_coupling: bool = False,
) -> tuple[float, float]:
    """
    Location of maximum |S21| at f0 and the value there.

    Scans ``coarse_step, 2*coarse_step, ...`` across the span, then runs a
    golden-section search on the bracket around the best sample. The
    result is never worse than that sample.
    """
    sys = _resolve_ic(sys, ic)
    sweep = location_sweep(sys, step=coarse_step, zero_coupling=zero_coupling)
    locs = np.array([x for x, _ in sweep])
    vals = np.array([v for _, v in sweep])
    i = int(np.nanargmax(vals))
    a = locs[i - 1] if i > 0 else 0.5 * locs[0]
    b = locs[i + 1] if i + 1 < locs.size else 0.5 * (locs[-1] + sys.d_txc_rxc)

    def objective(x):
        try:
            return _s21_mag(sys, x, zero_coupling)
        except _NUMERIC_ERRORS:
            return -math.inf

    x, v = golden_section_max(objective, a, b, tol)
    if v < vals[i]:
        return float(locs[i]), float(vals[i])
    return float(x), float(v)


@dataclass(frozen=True)
class OptimumReport:
    ic_od: float
    loc_equal_coupling: float
    loc_max_s21: float
    s21_at_max: float
    k_txc_ic_at_equal: float
    k_rxc_ic_at_equal: float
    k_txc_ic_at_max: float
    k_rxc_ic_at_max: float
    span: float = 0.150

    def __post_init__(self):
        for name in ("loc_equal_coupling", "loc_max_s21"):
            v = getattr(self, name)
            if not 0 < v < self.span:
                raise ValueError(f"{name}={v} outside (0, {self.span})")


def optimum_for_od(sys: SystemConfig, od: float, coarse_step: float = DEFAULT_COARSE_STEP) -> OptimumReport:
    sys_od = _resolve_ic(sys, float(od))
    loc_eq = find_equal_coupling_location(sys_od)
    loc_max, value = find_max_s21_location(sys_od, coarse_step=coarse_step)
    k_eq = spiral_couplings(sys_od, loc_eq)
    k_max = spiral_couplings(sys_od, loc_max)
    return OptimumReport(float(od), loc_eq, loc_max, value, *k_eq, *k_max, span=sys.d_txc_rxc)


def optimal_size_scan(
    sys: SystemConfig,
    od_list: Sequence[float] = DEFAULT_OD_LIST,
    coarse_step: float = DEFAULT_COARSE_STEP,
    threads: Optional[int] = None,
) -> tuple[float, list[OptimumReport]]:
    """
    Best IC outer diameter, each OD evaluated at its own max-|S21| location.

    Returns ``(od_star, reports)`` with one report per entry of ``od_list``.
    """
    if len(od_list) < 3:
        raise ValueError("optimal_size_scan needs at least three outer diameters")
    reports = _map(lambda od: optimum_for_od(sys, od, coarse_step), list(od_list), threads)
    best = max(reports, key=lambda r: r.s21_at_max)
    return best.ic_od, reports


@dataclass(frozen=True)
class MeasurementSeries:
    """Measured |S21| samples; all lengths in meters."""

    ic_od: np.ndarray
    location: np.ndarray
    s21_mag: np.ndarray

    def __post_init__(self):
        for name in ("ic_od", "location", "s21_mag"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.ic_od.shape == self.location.shape == self.s21_mag.shape):
            raise ValueError("measurement columns must have equal length")
        if self.s21_mag.size and (self.s21_mag.min() < 0 or self.s21_mag.max() > 1):
            raise ValueError("measured |S21| must lie in [0, 1]")

    def __len__(self):
        return int(self.s21_mag.size)

    def check_span(self, span: float):
        if self.location.size and (self.location.min() <= 0 or self.location.max() >= span):
            raise ValueError(f"measured locations must lie inside (0, {span})")

    @classmethod
    def from_heatmap(cls, hm: Heatmap) -> "MeasurementSeries":
        od, loc = np.meshgrid(hm.od_axis, hm.loc_axis, indexing="ij")
        keep = np.isfinite(hm.values)
        return cls(od[keep], loc[keep], hm.values[keep])

    def per_od_maximum(self) -> dict:
        """``{od: (location, value)}`` of the largest sample for each OD."""
        out = {}
        for od in np.unique(self.ic_od):
            sel = self.ic_od == od
            j = int(np.argmax(self.s21_mag[sel]))
            out[float(od)] = (float(self.location[sel][j]), float(self.s21_mag[sel][j]))
        return out


@dataclass(frozen=True)
class ResidualRow:
    ic_od: float
    sim_location: float
    meas_location: float
    location_delta: float
    location_delta_pct: float
    sim_s21: float
    meas_s21: float
    s21_delta: float


@dataclass
class ComparisonReport:
    rows: list
    sample_deltas: np.ndarray
    span: float

    @property
    def mean_location_delta(self) -> float:
        return float(np.mean([r.location_delta for r in self.rows]))

    @property
    def max_abs_location_delta(self) -> float:
        return float(np.max([abs(r.location_delta) for r in self.rows]))

    @property
    def mean_abs_location_pct(self) -> float:
        return float(np.mean([abs(r.location_delta_pct) for r in self.rows]))

    @property
    def rms_s21_delta(self) -> float:
        d = np.array([r.s21_delta for r in self.rows])
        return float(np.sqrt(np.mean(d * d)))


def _nearest(axis: np.ndarray, value: float) -> Optional[int]:
    axis = np.asarray(axis, float)
    i = int(np.argmin(np.abs(axis - value)))
    if axis.size > 1:
        half = 0.5 * np.min(np.diff(np.sort(axis)))
    else:
        half = 1e-6
    return i if abs(axis[i] - value) <= half + 1e-12 else None


def compare_with_measurement(
    simulated: Union[Heatmap, Sequence[OptimumReport]],
    measured: MeasurementSeries,
) -> ComparisonReport:
    """
    Per-OD residuals between simulated and measured optimum locations.

    For a heatmap the simulated optimum of each row is its argmax column and
    every measured sample is also matched to its nearest grid cell for value
    residuals. For a list of reports the refined max-|S21| location is used.
    Deltas are measured minus simulated; percentages are of the TX-RX span.
    """
    meas_best = measured.per_od_maximum()
    rows = []
    sample_deltas = []
    if isinstance(simulated, Heatmap):
        span = simulated.span
        sim_loc = simulated.row_argmax()
        sim_val = np.nanmax(np.where(np.isfinite(simulated.values), simulated.values, -np.inf), axis=1)
        for od, (m_loc, m_val) in meas_best.items():
            i = _nearest(simulated.od_axis, od)
            if i is None or not np.isfinite(sim_loc[i]):
                continue
            rows.append(_residual(simulated.od_axis[i], sim_loc[i], m_loc, sim_val[i], m_val, span))
        for od, loc, val in zip(measured.ic_od, measured.location, measured.s21_mag):
            i = _nearest(simulated.od_axis, od)
            j = _nearest(simulated.loc_axis, loc)
            if i is not None and j is not None and np.isfinite(simulated.values[i, j]):
                sample_deltas.append(val - simulated.values[i, j])
    else:
        reports = list(simulated)
        if not reports:
            raise ValueError("no simulated reports to compare")
        span = reports[0].span
        ods = np.array([r.ic_od for r in reports])
        for od, (m_loc, m_val) in meas_best.items():
            i = _nearest(ods, od)
            if i is None:
                continue
            r = reports[i]
            rows.append(_residual(r.ic_od, r.loc_max_s21, m_loc, r.s21_at_max, m_val, span))
    if not rows:
        raise ValueError("simulated and measured data share no outer diameters")
    return ComparisonReport(rows, np.asarray(sample_deltas, float), span)


def _residual(od, sim_loc, meas_loc, sim_val, meas_val, span) -> ResidualRow:
    delta = meas_loc - sim_loc
    return ResidualRow(
        float(od),
        float(sim_loc),
        float(meas_loc),
        float(delta),
        float(100 * delta / span),
        float(sim_val),
        float(meas_val),
        float(meas_val - sim_val),
    )
