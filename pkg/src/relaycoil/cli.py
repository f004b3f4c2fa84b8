"""
Command-line front end.

    relaycoil <subcommand> (--config PATH | --preset NAME) [--out DIR]
              [--threads N] [--zero-coupling] [--measured PATH]

Exit status: 0 success, 2 configuration error, 3 numerical failure
(including any failed grid cell or frequency point), 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import csvio
from .config import PRESETS, ConfigError, RunConfig, load_config, load_preset
from .electromagnetics import QuadratureError
from .network import ELEMENT_NAMES, coupling_coefficients, frequency_sweep, mutual_inductances, s21
from .sweep import (
    MeasurementSeries,
    compare_with_measurement,
    optimal_size_scan,
    size_location_heatmap,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

SUBCOMMANDS = ("simulate", "freq-sweep", "sweep", "heatmap", "optimize", "compare")


class NumericalFailure(RuntimeError):
    pass


def _out_dir(args, cfg: RunConfig) -> Path:
    out = Path(args.out) if args.out else (cfg.output_dir or Path("."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(cfg: RunConfig, args) -> int:
    system = cfg.system
    resp = s21(system, zero_coupling=args.zero_coupling)
    print(f"{'element':<8}{'od_mm':>10}{'L_H':>14}{'C_F':>14}{'R_p_ohm':>12}")
    for name in ELEMENT_NAMES:
        el = getattr(system, name)
        print(f"{name:<8}{el.coil.od * 1e3:>10.4g}{el.self_l:>14.6g}{el.tuning_c:>14.6g}{el.r_parasitic:>12.6g}")
    if args.zero_coupling:
        ks = (0.0, 0.0, 0.0, 0.0)
    else:
        ks = coupling_coefficients(system, mutual_inductances(system))
    for label, k in zip(("k_txl_txc", "k_txc_ic", "k_ic_rxc", "k_rxc_rxl"), ks):
        print(f"{label} = {k:.9g}")
    mag = resp.s21_mag
    db = 20 * math.log10(mag) if mag > 0 else -math.inf
    print(f"f_hz = {resp.f:.9g}")
    print(f"d_txc_ic_mm = {system.d_txc_ic * 1e3:.9g}")
    print(f"s21_mag = {mag:.9g}")
    print(f"s21_db = {db:.9g}")
    return EXIT_OK


def cmd_freq_sweep(cfg: RunConfig, args) -> int:
    sw = cfg.sweep
    responses = frequency_sweep(
        cfg.system, sw.freq_lo, sw.freq_hi, sw.freq_points, sw.freq_scale, zero_coupling=args.zero_coupling
    )
    path = csvio.write_spectrum_csv(_out_dir(args, cfg) / "spectrum.csv", responses)
    print(f"wrote {path}")
    failed = sum(not r.ok for r in responses)
    if failed:
        raise NumericalFailure(f"{failed} frequency points failed; see {csvio.error_log_path(path)}")
    return EXIT_OK


def _heatmap(cfg: RunConfig, args, od_list, name: str) -> int:
    hm = size_location_heatmap(
        cfg.system, od_list, cfg.sweep.locations, threads=args.threads, zero_coupling=args.zero_coupling
    )
    path = csvio.write_heatmap_csv(_out_dir(args, cfg) / name, hm)
    print(f"wrote {path}")
    failed = int(np.isnan(hm.values).sum())
    if failed:
        raise NumericalFailure(f"{failed} heatmap cells failed; see {csvio.error_log_path(path)}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    return _heatmap(cfg, args, [cfg.system.ic.coil.od], "sweep.csv")


def cmd_heatmap(cfg: RunConfig, args) -> int:
    return _heatmap(cfg, args, cfg.sweep.od_list, "heatmap.csv")


def cmd_optimize(cfg: RunConfig, args) -> int:
    od_star, reports = optimal_size_scan(cfg.system, cfg.sweep.od_list, cfg.sweep.coarse_step, threads=args.threads)
    path = csvio.write_optimum_csv(_out_dir(args, cfg) / "optimum.csv", reports)
    print(f"wrote {path}")
    print(f"simulated_optimum_od_mm = {od_star * 1e3:.9g}")
    ref = cfg.sweep.reference_optimum_od
    if ref is not None:
        print(f"reference_optimum_od_mm = {ref * 1e3:.9g}")
        print(f"optimum_od_delta_mm = {(od_star - ref) * 1e3:.9g}")
    return EXIT_OK


def cmd_compare(cfg: RunConfig, args) -> int:
    path = args.measured or cfg.measured_path
    if path is None:
        raise ConfigError("compare needs a measurement file (--measured or [output] measured)")
    measured = csvio.read_measurement_csv(path)
    if len(measured) == 0:
        raise ConfigError(f"{path}: no measurement rows")
    measured.check_span(cfg.system.d_txc_rxc)
    ods = np.unique(measured.ic_od)
    locs = np.unique(measured.location)
    hm = size_location_heatmap(cfg.system, ods, locs, threads=args.threads, zero_coupling=args.zero_coupling)
    report = compare_with_measurement(hm, measured)
    out = csvio.write_residual_csv(_out_dir(args, cfg) / "residuals.csv", report)
    print(f"wrote {out}")
    print(f"mean_location_delta_mm = {report.mean_location_delta * 1e3:.9g}")
    print(f"max_abs_location_delta_mm = {report.max_abs_location_delta * 1e3:.9g}")
    print(f"mean_abs_location_delta_pct_span = {report.mean_abs_location_pct:.9g}")
    print(f"rms_s21_delta = {report.rms_s21_delta:.9g}")
    if np.isnan(hm.values).any():
        raise NumericalFailure("some simulated cells failed")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "freq-sweep": cmd_freq_sweep,
    "sweep": cmd_sweep,
    "heatmap": cmd_heatmap,
    "optimize": cmd_optimize,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relaycoil", description="Five-coil resonant WPT simulator")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="configuration file (INI sections, lengths in mm)")
    src.add_argument("--preset", choices=PRESETS, help="shipped configuration")
    parser.add_argument("--out", help="output directory (default: [output] dir or cwd)")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for grid evaluation")
    parser.add_argument("--zero-coupling", action="store_true", help="diagnostic: drop every mutual term")
    parser.add_argument("--measured", help="measurement CSV for compare")
    return parser


def run_subcommand(name: str, cfg: RunConfig, args) -> int:
    return COMMANDS[name](cfg, args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_preset(args.preset) if args.preset else load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return run_subcommand(args.subcommand, cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except csvio.MeasurementFormatError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalFailure, QuadratureError, ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
