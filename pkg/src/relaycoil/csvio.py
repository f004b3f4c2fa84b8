"""CSV emission and measurement ingestion. Files use millimeters for lengths."""

from __future__ import annotations

import csv
import math
import warnings
from pathlib import Path

import numpy as np

from .sweep import ComparisonReport, Heatmap, MeasurementSeries, OptimumReport

HEATMAP_HEADER = ("ic_od_mm", "separation_mm", "s21_mag")
SPECTRUM_HEADER = ("freq_hz", "s21_mag", "s21_db")
OPTIMUM_HEADER = (
    "ic_od_mm",
    "loc_equal_coupling_mm",
    "loc_max_s21_mm",
    "s21_at_max",
    "k_txc_ic_at_equal",
    "k_rxc_ic_at_equal",
    "k_txc_ic_at_max",
    "k_rxc_ic_at_max",
)
RESIDUAL_HEADER = (
    "ic_od_mm",
    "sim_location_mm",
    "meas_location_mm",
    "location_delta_mm",
    "location_delta_pct_span",
    "sim_s21_mag",
    "meas_s21_mag",
    "s21_delta",
)

# anything past these is probably meters or dB in the wrong column
_PLAUSIBLE_OD_MM = (1.0, 2000.0)
_PLAUSIBLE_SEP_MM = (0.0, 10000.0)


class MeasurementFormatError(ValueError):
    pass


def fmt(x) -> str:
    """9 significant digits; NaN becomes an empty field."""
    x = float(x)
    if math.isnan(x):
        return ""
    return f"{x:.9g}"


def _write(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def error_log_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".errors.log")


def _write_errors(path, lines):
    log = error_log_path(path)
    if lines:
        log.write_text("".join(line + "\n" for line in lines))
    elif log.exists():
        log.unlink()


def write_heatmap_csv(path, hm: Heatmap) -> Path:
    """One row per cell, OD-major. Failed cells get an empty ``s21_mag`` and a sidecar log entry."""
    rows = []
    for i, od in enumerate(hm.od_axis):
        for j, loc in enumerate(hm.loc_axis):
            rows.append((fmt(od * 1e3), fmt(loc * 1e3), fmt(hm.values[i, j])))
    path = _write(path, HEATMAP_HEADER, rows)
    failed = []
    for i, od in enumerate(hm.od_axis):
        for j, loc in enumerate(hm.loc_axis):
            if math.isnan(hm.values[i, j]):
                msg = hm.errors.get((float(od), float(loc)), "evaluation failed")
                failed.append(f"ic_od_mm={fmt(od * 1e3)},separation_mm={fmt(loc * 1e3)}: {msg}")
    _write_errors(path, failed)
    return path


def write_spectrum_csv(path, responses) -> Path:
    rows = []
    failed = []
    for r in responses:
        mag = r.s21_mag
        if r.ok:
            db = 20 * math.log10(mag) if mag > 0 else -math.inf
            rows.append((fmt(r.f), fmt(mag), fmt(db) if math.isfinite(db) else "-inf"))
        else:
            rows.append((fmt(r.f), "", ""))
            failed.append(f"freq_hz={fmt(r.f)}: {r.error}")
    path = _write(path, SPECTRUM_HEADER, rows)
    _write_errors(path, failed)
    return path


def write_optimum_csv(path, reports) -> Path:
    rows = [
        (
            fmt(r.ic_od * 1e3),
            fmt(r.loc_equal_coupling * 1e3),
            fmt(r.loc_max_s21 * 1e3),
            fmt(r.s21_at_max),
            fmt(r.k_txc_ic_at_equal),
            fmt(r.k_rxc_ic_at_equal),
            fmt(r.k_txc_ic_at_max),
            fmt(r.k_rxc_ic_at_max),
        )
        for r in reports
    ]
    return _write(path, OPTIMUM_HEADER, rows)


def write_residual_csv(path, report: ComparisonReport) -> Path:
    rows = [
        (
            fmt(r.ic_od * 1e3),
            fmt(r.sim_location * 1e3),
            fmt(r.meas_location * 1e3),
            fmt(r.location_delta * 1e3),
            fmt(r.location_delta_pct),
            fmt(r.sim_s21),
            fmt(r.meas_s21),
            fmt(r.s21_delta),
        )
        for r in report.rows
    ]
    return _write(path, RESIDUAL_HEADER, rows)


def read_heatmap_csv(path) -> Heatmap:
    """Rebuild a heatmap written by ``write_heatmap_csv``; empty cells become NaN."""
    od, loc, val = _read_rows(path, allow_empty=True)
    od_axis = np.unique(od)
    loc_axis = np.unique(loc)
    values = np.full((od_axis.size, loc_axis.size), np.nan)
    values[np.searchsorted(od_axis, od), np.searchsorted(loc_axis, loc)] = val
    return Heatmap(od_axis, loc_axis, values)


def read_measurement_csv(path) -> MeasurementSeries:
    """
    Load measured ``|S21|`` samples in the heatmap schema.

    Rows with an empty ``s21_mag`` are skipped. Malformed rows raise
    ``MeasurementFormatError`` naming the row; implausible magnitudes for
    millimeter columns produce a warning.
    """
    od, loc, val = _read_rows(path, allow_empty=False)
    return MeasurementSeries(od, loc, val)


def _read_rows(path, allow_empty: bool):
    path = Path(path)
    od, loc, val = [], [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != HEATMAP_HEADER:
            raise MeasurementFormatError(f"{path}: header must be {','.join(HEATMAP_HEADER)}, got {header}")
        for rownum, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise MeasurementFormatError(f"{path}: row {rownum}: expected 3 fields, got {len(row)}")
            if not row[2].strip():
                if allow_empty:
                    od.append(_num(path, rownum, row[0]) * 1e-3)
                    loc.append(_num(path, rownum, row[1]) * 1e-3)
                    val.append(math.nan)
                continue
            a, b, c = (_num(path, rownum, x) for x in row)
            if not _PLAUSIBLE_OD_MM[0] <= a <= _PLAUSIBLE_OD_MM[1]:
                warnings.warn(f"{path}: row {rownum}: ic_od_mm={a} looks implausible for millimeters")
            if not _PLAUSIBLE_SEP_MM[0] <= b <= _PLAUSIBLE_SEP_MM[1]:
                warnings.warn(f"{path}: row {rownum}: separation_mm={b} looks implausible for millimeters")
            if not 0 <= c <= 1:
                raise MeasurementFormatError(f"{path}: row {rownum}: s21_mag={c} outside [0, 1] (linear magnitude expected)")
            od.append(a * 1e-3)
            loc.append(b * 1e-3)
            val.append(c)
    return np.array(od), np.array(loc), np.array(val)


def _num(path, rownum, text) -> float:
    try:
        v = float(text)
    except ValueError:
        raise MeasurementFormatError(f"{path}: row {rownum}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise MeasurementFormatError(f"{path}: row {rownum}: non-finite value {text!r}")
    return v
