"""
Five-mesh circuit model: TXL - TXC - IC - RXC - RXL.

Only adjacent coils are coupled. Mesh currents come from a general complex
linear solve; the closed-form voltage gain of the tridiagonal system is kept
alongside as an independent check.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .electromagnetics import (
    DEFAULT_CONSTANTS,
    PhysicalConstants,
    ResonantElement,
    coupling_coefficient,
    mutual_inductance,
)
from .geometry import Coil

DEFAULT_F0 = 13.56e6
DEFAULT_PORT_RESISTANCE = 50.0
COND_LIMIT = 1e14
RESIDUAL_LIMIT = 1e-10
CROSS_CHECK_RTOL = 1e-6

ELEMENT_NAMES = ("txl", "txc", "ic", "rxc", "rxl")


class SingularSystemError(np.linalg.LinAlgError):
    """Impedance matrix is singular or too ill-conditioned to trust."""


@dataclass(frozen=True)
class SystemConfig:
    """
    The full five-element chain.

    Distances are axial face-to-face separations in meters. ``d_txc_ic`` is
    the swept location of the intermediate coil, measured from the TX spiral.
    """

    txl: ResonantElement
    txc: ResonantElement
    ic: ResonantElement
    rxc: ResonantElement
    rxl: ResonantElement
    d_txl_txc: float
    d_txc_rxc: float
    d_txc_ic: float
    d_rxc_rxl: float
    f0: float = DEFAULT_F0
    r_source: float = DEFAULT_PORT_RESISTANCE
    r_load: float = DEFAULT_PORT_RESISTANCE
    constants: PhysicalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        if not (self.f0 > 0 and self.r_source > 0 and self.r_load > 0):
            raise ValueError("f0, r_source and r_load must be positive")
        if not 0 < self.d_txc_ic < self.d_txc_rxc:
            raise ValueError(
                f"IC location d_txc_ic={self.d_txc_ic} must lie strictly inside (0, {self.d_txc_rxc})"
            )
        if not (self.d_txl_txc > 0 and self.d_rxc_rxl > 0):
            raise ValueError("loop-to-spiral separations must be positive")
        for name in ELEMENT_NAMES:
            el = getattr(self, name)
            if el.f0 != self.f0:
                raise ValueError(f"element {name} is tuned to {el.f0} Hz, system f0 is {self.f0} Hz")

    @property
    def elements(self) -> tuple[ResonantElement, ...]:
        return tuple(getattr(self, n) for n in ELEMENT_NAMES)

    def with_ic(self, ic: Optional[Coil] = None, d_txc_ic: Optional[float] = None) -> "SystemConfig":
        """Copy with a different intermediate coil and/or location."""
        changes = {}
        if ic is not None:
            changes["ic"] = ResonantElement.from_coil(ic, self.f0, self.constants)
        if d_txc_ic is not None:
            changes["d_txc_ic"] = d_txc_ic
        return dataclasses.replace(self, **changes)

    def mirrored(self) -> "SystemConfig":
        """Source and load sides swapped, including port resistances."""
        return dataclasses.replace(
            self,
            txl=self.rxl,
            txc=self.rxc,
            rxc=self.txc,
            rxl=self.txl,
            d_txl_txc=self.d_rxc_rxl,
            d_rxc_rxl=self.d_txl_txc,
            d_txc_ic=self.d_txc_rxc - self.d_txc_ic,
            r_source=self.r_load,
            r_load=self.r_source,
        )


def build_system(
    coils: dict,
    d_txl_txc: float,
    d_txc_rxc: float,
    d_txc_ic: float,
    d_rxc_rxl: float,
    f0: float = DEFAULT_F0,
    r_source: float = DEFAULT_PORT_RESISTANCE,
    r_load: float = DEFAULT_PORT_RESISTANCE,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> SystemConfig:
    """Tune each coil in ``coils`` (keyed txl/txc/ic/rxc/rxl) to ``f0`` and assemble the chain."""
    missing = [n for n in ELEMENT_NAMES if n not in coils]
    if missing:
        raise ValueError(f"missing coils: {', '.join(missing)}")
    elements = {n: ResonantElement.from_coil(coils[n], f0, constants) for n in ELEMENT_NAMES}
    return SystemConfig(
        **elements,
        d_txl_txc=d_txl_txc,
        d_txc_rxc=d_txc_rxc,
        d_txc_ic=d_txc_ic,
        d_rxc_rxl=d_rxc_rxl,
        f0=f0,
        r_source=r_source,
        r_load=r_load,
        constants=constants,
    )


def mutual_inductances(sys: SystemConfig) -> tuple[float, float, float, float]:
    """M12, M2i, M3i, M34 for the four adjacent pairs."""
    mu = sys.constants
    return (
        mutual_inductance(sys.txl.radii, sys.txc.radii, sys.d_txl_txc, mu),
        mutual_inductance(sys.txc.radii, sys.ic.radii, sys.d_txc_ic, mu),
        mutual_inductance(sys.ic.radii, sys.rxc.radii, sys.d_txc_rxc - sys.d_txc_ic, mu),
        mutual_inductance(sys.rxc.radii, sys.rxl.radii, sys.d_rxc_rxl, mu),
    )


def coupling_coefficients(sys: SystemConfig, mutuals=None) -> tuple[float, float, float, float]:
    """k for TXL-TXC, TXC-IC, IC-RXC, RXC-RXL."""
    m = mutual_inductances(sys) if mutuals is None else mutuals
    els = sys.elements
    return tuple(coupling_coefficient(m[i], els[i].self_l, els[i + 1].self_l) for i in range(4))


@dataclass(frozen=True)
class ImpedanceMatrix:
    z: np.ndarray
    f: float

    def __getitem__(self, idx):
        return self.z[idx]


def build_impedance_matrix(
    sys: SystemConfig,
    f: float,
    zero_coupling: bool = False,
    mutuals=None,
) -> ImpedanceMatrix:
    """
    Mesh impedance matrix at frequency ``f``.

    Diagonal: ``R_p + j w L + 1/(j w C)``, plus ``r_source`` on the first
    mesh and ``r_load`` on the last. Off-diagonal: ``j w M`` for the four
    adjacent pairs, zero elsewhere. ``zero_coupling`` drops every mutual
    term (diagnostic).
    """
    if not f > 0:
        raise ValueError(f"frequency must be positive, got {f}")
    w = 2 * math.pi * f
    z = np.zeros((5, 5), dtype=complex)
    for i, el in enumerate(sys.elements):
        z[i, i] = el.resistance_at(f) + 1j * (w * el.self_l - 1.0 / (w * el.tuning_c))
    z[0, 0] += sys.r_source
    z[4, 4] += sys.r_load
    if not zero_coupling:
        m = mutual_inductances(sys) if mutuals is None else mutuals
        for i, mi in enumerate(m):
            z[i, i + 1] = z[i + 1, i] = 1j * w * mi
    return ImpedanceMatrix(z, f)


def solve_mesh_currents(z: ImpedanceMatrix, v_source: float = 1.0) -> np.ndarray:
    """Solve ``Z I = [V, 0, 0, 0, 0]`` (LU with partial pivoting)."""
    zz = np.asarray(z.z if isinstance(z, ImpedanceMatrix) else z)
    cond = np.linalg.cond(zz)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(f"impedance matrix condition number {cond:.3g} exceeds {COND_LIMIT:.0e}")
    v = np.zeros(zz.shape[0], dtype=complex)
    v[0] = v_source
    i = np.linalg.solve(zz, v)
    residual = np.linalg.norm(zz @ i - v) / np.linalg.norm(v)
    if residual > RESIDUAL_LIMIT:
        raise SingularSystemError(f"mesh solve residual {residual:.3g} exceeds {RESIDUAL_LIMIT}")
    return i


def voltage_gain_closed_form(z: ImpedanceMatrix, r_load: float) -> complex:
    """``V_load / V_source`` from the explicit expansion of the tridiagonal determinant."""
    zz = z.z if isinstance(z, ImpedanceMatrix) else z
    z11, z22, zii, z33, z44 = (zz[k, k] for k in range(5))
    z12, z2i, z3i, z34 = zz[0, 1], zz[1, 2], zz[2, 3], zz[3, 4]
    den = (
        z11 * z22 * zii * z33 * z44
        + z11 * z2i**2 * z34**2
        + zii * z12**2 * z34**2
        + z44 * z12**2 * z3i**2
        - z12**2 * zii * z33 * z44
        - z2i**2 * z11 * z33 * z44
        - z3i**2 * z11 * z22 * z44
        - z34**2 * z11 * z22 * zii
    )
    if den == 0:
        raise ZeroDivisionError("closed-form gain denominator vanishes")
    return z12 * z2i * z3i * z34 * r_load / den


@dataclass(frozen=True)
class PortResponse:
    f: float
    v_gain: complex
    s21: complex
    mesh_currents: np.ndarray
    error: Optional[str] = None

    @property
    def s21_mag(self) -> float:
        return abs(self.s21)

    @property
    def ok(self) -> bool:
        return self.error is None


def s21(sys: SystemConfig, f: Optional[float] = None, zero_coupling: bool = False, mutuals=None) -> PortResponse:
    """
    Forward transmission ``S21 = 2 (V_load / V_source) sqrt(R_source / R_load)``.

    ``f`` defaults to the design frequency ``sys.f0``.
    """
    f = sys.f0 if f is None else f
    z = build_impedance_matrix(sys, f, zero_coupling=zero_coupling, mutuals=mutuals)
    currents = solve_mesh_currents(z, 1.0)
    gain = currents[4] * sys.r_load
    check = voltage_gain_closed_form(z, sys.r_load)
    if abs(gain - check) > CROSS_CHECK_RTOL * max(abs(gain), abs(check)):
        raise ArithmeticError(f"solver gain {gain} disagrees with closed form {check}")
    return PortResponse(f, gain, 2 * gain * math.sqrt(sys.r_source / sys.r_load), currents)


def frequency_sweep(
    sys: SystemConfig,
    f_lo: float,
    f_hi: float,
    n_points: int,
    scale: str = "linear",
    zero_coupling: bool = False,
) -> list[PortResponse]:
    """S21 over a frequency grid. Points that fail carry ``error`` and NaN values."""
    if not 0 < f_lo < f_hi:
        raise ValueError(f"need 0 < f_lo < f_hi, got {f_lo}, {f_hi}")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    if scale == "linear":
        grid = np.linspace(f_lo, f_hi, n_points)
    elif scale == "log":
        grid = np.geomspace(f_lo, f_hi, n_points)
    else:
        raise ValueError(f"scale must be 'linear' or 'log', got {scale!r}")
    mutuals = None if zero_coupling else mutual_inductances(sys)
    out = []
    nan = complex(math.nan, math.nan)
    for f in grid:
        f = float(f)
        try:
            out.append(s21(sys, f, zero_coupling=zero_coupling, mutuals=mutuals))
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            out.append(PortResponse(f, nan, nan, np.full(5, nan), error=str(exc)))
    return out
