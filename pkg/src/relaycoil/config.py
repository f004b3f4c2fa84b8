"""
Run configuration files.

INI-style sections of ``key = value`` pairs. Lengths are given in
millimeters and converted to meters here, once. Unknown sections or keys
are rejected so typos do not silently fall back to defaults.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .electromagnetics import MU0, PhysicalConstants
from .geometry import AWG20_DIAMETER, COPPER_CONDUCTIVITY, LoopCoil, SpiralCoil, WireSpec
from .network import DEFAULT_F0, DEFAULT_PORT_RESISTANCE, SystemConfig, build_system
from .sweep import DEFAULT_COARSE_STEP, step_grid

PRESETS = ("symmetric", "asymmetric")

_REQUIRED = object()
_MM = 1e-3

# section -> key -> default (None = optional, _REQUIRED = must be present)
SCHEMA = {
    "system": {
        "f0_hz": DEFAULT_F0,
        "r_source_ohm": DEFAULT_PORT_RESISTANCE,
        "r_load_ohm": DEFAULT_PORT_RESISTANCE,
        "mu0": MU0,
        "d_txc_rxc_mm": _REQUIRED,
        "d_txc_ic_mm": _REQUIRED,
        "d_txl_txc_mm": _REQUIRED,
        "d_rxc_rxl_mm": _REQUIRED,
    },
    "wire": {
        "diameter_w_mm": AWG20_DIAMETER / _MM,
        "conductivity_sigma": COPPER_CONDUCTIVITY,
    },
    "coils": {
        "turns_n": _REQUIRED,
        "pitch_p_mm": _REQUIRED,
        "txl_od_mm": _REQUIRED,
        "txc_od_mm": _REQUIRED,
        "ic_od_mm": _REQUIRED,
        "rxc_od_mm": _REQUIRED,
        "rxl_od_mm": _REQUIRED,
    },
    "sweep": {
        "od_list_mm": None,
        "od_start_mm": 30.0,
        "od_stop_mm": 200.0,
        "od_step_mm": 10.0,
        "loc_start_mm": None,
        "loc_stop_mm": None,
        "loc_points": 31,
        "coarse_step_mm": DEFAULT_COARSE_STEP / _MM,
        "freq_lo_hz": None,
        "freq_hi_hz": None,
        "freq_points": 2001,
        "freq_scale": "linear",
        "reference_optimum_od_mm": None,
    },
    "output": {
        "dir": None,
        "measured": None,
    },
}

_STRINGS = {("sweep", "freq_scale"), ("output", "dir"), ("output", "measured"), ("sweep", "od_list_mm")}
_INTEGERS = {("coils", "turns_n"), ("sweep", "loc_points"), ("sweep", "freq_points")}


class ConfigError(ValueError):
    """Invalid configuration text or values."""


@dataclass(frozen=True)
class SweepSettings:
    od_list: tuple
    locations: np.ndarray
    coarse_step: float
    freq_lo: float
    freq_hi: float
    freq_points: int
    freq_scale: str
    reference_optimum_od: Optional[float] = None


@dataclass(frozen=True)
class RunConfig:
    system: SystemConfig
    sweep: SweepSettings
    output_dir: Optional[Path] = None
    measured_path: Optional[Path] = None
    name: str = "config"


def _line_of(text: str, key: str) -> Optional[int]:
    for n, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return n
    return None


def _where(text: str, section: str, key: str) -> str:
    n = _line_of(text, key)
    return f"[{section}] {key}" + (f" (line {n})" if n else "")


def parse_config(text: str, base_dir: Optional[Path] = None, name: str = "config") -> RunConfig:
    """
    Parse and validate a configuration document.

    Raises ConfigError on syntax errors (with line numbers), unknown
    sections or keys, missing required keys, unparseable numbers, and any
    physical invariant the resulting system violates.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None

    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {_where(text, section, key)}")

    values = {}
    for section, keys in SCHEMA.items():
        for key, default in keys.items():
            raw = parser.get(section, key, fallback=None) if parser.has_section(section) else None
            if raw is None or raw.strip() == "":
                if default is _REQUIRED:
                    raise ConfigError(f"missing required key '{key}' in [{section}]")
                values[key] = default
                continue
            raw = raw.strip()
            if (section, key) in _STRINGS:
                values[key] = raw
                continue
            try:
                v = float(raw)
            except ValueError:
                raise ConfigError(f"{_where(text, section, key)}: not a number: {raw!r}") from None
            if not math.isfinite(v):
                raise ConfigError(f"{_where(text, section, key)}: must be finite")
            if (section, key) in _INTEGERS:
                if v != int(v):
                    raise ConfigError(f"{_where(text, section, key)}: must be an integer")
                v = int(v)
            values[key] = v

    try:
        return _build(values, base_dir, name)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def _build(v: dict, base_dir: Optional[Path], name: str) -> RunConfig:
    wire = WireSpec(v["diameter_w_mm"] * _MM, v["conductivity_sigma"])
    n = v["turns_n"]
    pitch = v["pitch_p_mm"] * _MM

    def spiral(key):
        return SpiralCoil(v[key] * _MM, n, pitch, wire)

    coils = {
        "txl": LoopCoil(v["txl_od_mm"] * _MM, wire),
        "txc": spiral("txc_od_mm"),
        "ic": spiral("ic_od_mm"),
        "rxc": spiral("rxc_od_mm"),
        "rxl": LoopCoil(v["rxl_od_mm"] * _MM, wire),
    }
    span = v["d_txc_rxc_mm"] * _MM
    system = build_system(
        coils,
        d_txl_txc=v["d_txl_txc_mm"] * _MM,
        d_txc_rxc=span,
        d_txc_ic=v["d_txc_ic_mm"] * _MM,
        d_rxc_rxl=v["d_rxc_rxl_mm"] * _MM,
        f0=v["f0_hz"],
        r_source=v["r_source_ohm"],
        r_load=v["r_load_ohm"],
        constants=PhysicalConstants(v["mu0"]),
    )

    if v["od_list_mm"] is not None:
        try:
            od_mm = [float(x) for x in v["od_list_mm"].replace(",", " ").split()]
        except ValueError:
            raise ConfigError(f"[sweep] od_list_mm: not a list of numbers: {v['od_list_mm']!r}") from None
    else:
        od_mm = list(step_grid(v["od_start_mm"], v["od_stop_mm"], v["od_step_mm"]))
    if not od_mm:
        raise ConfigError("[sweep] OD list is empty")
    od_list = tuple(round(x, 9) * _MM for x in od_mm)
    for od in od_list:
        SpiralCoil(od, n, pitch, wire)

    margin_mm = span / _MM / 60
    loc_lo = (v["loc_start_mm"] if v["loc_start_mm"] is not None else margin_mm) * _MM
    loc_hi = (v["loc_stop_mm"] if v["loc_stop_mm"] is not None else span / _MM - margin_mm) * _MM
    if v["loc_points"] < 1:
        raise ConfigError("[sweep] loc_points must be >= 1")
    locations = np.linspace(loc_lo, loc_hi, v["loc_points"])
    if not (0 < loc_lo <= loc_hi < span):
        raise ConfigError(f"[sweep] location range must lie inside (0, {span / _MM:g}) mm")

    f0 = v["f0_hz"]
    freq_lo = v["freq_lo_hz"] if v["freq_lo_hz"] is not None else 0.7 * f0
    freq_hi = v["freq_hi_hz"] if v["freq_hi_hz"] is not None else 1.3 * f0
    if not 0 < freq_lo < freq_hi:
        raise ConfigError("[sweep] need 0 < freq_lo_hz < freq_hi_hz")
    if v["freq_points"] < 2:
        raise ConfigError("[sweep] freq_points must be >= 2")
    if v["freq_scale"] not in ("linear", "log"):
        raise ConfigError("[sweep] freq_scale must be 'linear' or 'log'")
    if not v["coarse_step_mm"] > 0:
        raise ConfigError("[sweep] coarse_step_mm must be positive")
    ref = v["reference_optimum_od_mm"]

    sweep = SweepSettings(
        od_list=od_list,
        locations=locations,
        coarse_step=v["coarse_step_mm"] * _MM,
        freq_lo=freq_lo,
        freq_hi=freq_hi,
        freq_points=v["freq_points"],
        freq_scale=v["freq_scale"],
        reference_optimum_od=None if ref is None else ref * _MM,
    )

    def path(p):
        if p is None:
            return None
        p = Path(p)
        return p if p.is_absolute() or base_dir is None else base_dir / p

    return RunConfig(system, sweep, path(v["dir"]), path(v["measured"]), name)


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("relaycoil.presets").joinpath(f"{name}.ini").read_text()


def load_preset(name: str) -> RunConfig:
    """One of the shipped configurations, ``"symmetric"`` or ``"asymmetric"``."""
    return parse_config(preset_text(name), name=name)


def load_config(path) -> RunConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent, name=path.stem)
