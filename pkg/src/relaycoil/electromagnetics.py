"""
Lumped circuit elements from coil geometry.

Self-inductance, turn-by-turn mutual inductance, coupling coefficient,
series tuning capacitance and frequency-dependent parasitic resistance
(skin plus proximity, via Kelvin functions). SI units throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from scipy.integrate import quad

from .geometry import Coil, LoopCoil, SpiralCoil, turn_radii, wire_length
from .kelvin import kelvin

MU0 = 4e-7 * math.pi

# 39.37 in/m, result of the inch-based Wheeler fit is in microhenries
_WHEELER_SCALE = 39.37 / 1e6

QUAD_EPSREL = 1e-8
QUAD_EPSABS_HENRY = 1e-18
QUAD_LIMIT = 200


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class PhysicalConstants:
    mu0: float = MU0

    def __post_init__(self):
        if not self.mu0 > 0:
            raise ValueError(f"mu0 must be positive, got {self.mu0}")


DEFAULT_CONSTANTS = PhysicalConstants()


def self_inductance_spiral(coil: SpiralCoil) -> float:
    """
    Modified Wheeler inductance of a planar spiral, in henries.

    ``L = N^2 (OD - N(w+p))^2 / (16 OD + 28 N (w+p)) * 39.37e-6``

    The square applies to the whole difference ``OD - N(w+p)``; only that
    placement gives length units before the inch/microhenry scaling.
    """
    n = coil.turns_n
    s = coil.spacing
    core = coil.od - n * s
    if not core > 0:
        raise ValueError(f"OD - N(w+p) = {core} must be positive for the Wheeler formula")
    return n * n * core * core / (16 * coil.od + 28 * n * s) * _WHEELER_SCALE


def self_inductance_loop(coil: LoopCoil) -> float:
    """Single-turn loop, ``2 pi OD (ln(4 OD / w) - 1.75) 1e-7`` henries."""
    od = coil.od
    w = coil.wire.diameter_w
    value = 2 * math.pi * od * (math.log(4 * od / w) - 1.75) * 1e-7
    if not value > 0:
        raise ValueError(f"loop od={od}, w={w} gives nonpositive inductance {value}")
    return value


def self_inductance(coil: Coil) -> float:
    if isinstance(coil, LoopCoil):
        return self_inductance_loop(coil)
    return self_inductance_spiral(coil)


def _integrand(theta, a, b):
    return math.cos(theta) / math.sqrt(a - b * math.cos(theta))


@lru_cache(maxsize=1 << 17)
def _turn_pair(r_lo: float, r_hi: float, d: float, mu0: float) -> float:
    a = (r_lo * r_lo + r_hi * r_hi) + d * d
    b = 2 * r_lo * r_hi
    scale = mu0 * (r_lo * r_hi)
    # quad appends a message only when ier != 0
    value, abserr, info, *failure = quad(
        _integrand,
        0.0,
        math.pi,
        args=(a, b),
        epsabs=QUAD_EPSABS_HENRY / scale,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    if failure:
        raise QuadratureError(
            f"quadrature did not converge for r=({r_lo}, {r_hi}), d={d}: {failure[0].splitlines()[0]}"
        )
    return scale * value


def turn_pair_mutual_inductance(r_a: float, r_b: float, d: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Mutual inductance of two coaxial filament circles, radii ``r_a``, ``r_b``, axial gap ``d``."""
    r_a = float(r_a)
    r_b = float(r_b)
    d = abs(float(d))
    if not (r_a > 0 and r_b > 0):
        raise ValueError(f"turn radii must be positive, got {r_a}, {r_b}")
    if d == 0 and r_a == r_b:
        raise ValueError("coincident turns (d = 0, equal radii): mutual inductance is singular")
    lo, hi = (r_a, r_b) if r_a <= r_b else (r_b, r_a)
    return _turn_pair(lo, hi, d, constants.mu0)


def mutual_inductance(
    radii_a: Sequence[float],
    radii_b: Sequence[float],
    d: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """
    Mutual inductance between two coaxial multi-turn coils.

    Sums ``mu0 r_i r_j * int_0^pi cos t / sqrt(r_i^2 + r_j^2 + d^2 - 2 r_i r_j cos t) dt``
    over every turn pair. Each integral is adaptive Gauss-Kronrod to a
    relative tolerance of 1e-8. Pair contributions are summed with
    ``math.fsum`` so the result does not depend on argument order.

    Parameters
    ----------
    radii_a, radii_b : sequence of float
        Turn radii (m) of each coil.
    d : float
        Axial distance between the coil planes (m).
    """
    if d < 0:
        raise ValueError(f"axial distance must be >= 0, got {d}")
    terms = [turn_pair_mutual_inductance(ra, rb, d, constants) for ra in radii_a for rb in radii_b]
    return math.fsum(terms)


def coil_mutual_inductance(a: Coil, b: Coil, d: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    return mutual_inductance(turn_radii(a), turn_radii(b), d, constants)


def coupling_coefficient(m_ab: float, l_a: float, l_b: float) -> float:
    if not (l_a > 0 and l_b > 0):
        raise ValueError(f"self-inductances must be positive, got {l_a}, {l_b}")
    return m_ab / math.sqrt(l_a * l_b)


def tuning_capacitance(l: float, f0: float) -> float:
    """Series capacitance resonating ``l`` at ``f0``."""
    if not (l > 0 and f0 > 0):
        raise ValueError(f"inductance and frequency must be positive, got {l}, {f0}")
    w = 2 * math.pi * f0
    return 1.0 / (w * w * l)


def skin_depth(f: float, sigma: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    if not (f > 0 and sigma > 0):
        raise ValueError(f"frequency and conductivity must be positive, got {f}, {sigma}")
    return 1.0 / math.sqrt(math.pi * f * sigma * constants.mu0)


def dc_resistance(coil: Coil) -> float:
    w = coil.wire.diameter_w
    return wire_length(coil) / (coil.wire.conductivity_sigma * math.pi * (w / 2) ** 2)


def ac_resistance_factors(gamma: float) -> tuple[float, float]:
    """
    Skin and proximity multipliers of ``R_DC`` at ``gamma = w / (delta sqrt 2)``.

    skin = gamma/2 * (ber bei' - bei ber') / (ber'^2 + bei'^2)
    proximity = -pi gamma * (ber2 ber' + bei2 bei') / (ber^2 + bei^2)
    """
    if gamma < 1e-4:
        # leading terms of the series: skin -> 1, proximity ~ pi gamma^4 / 16
        return 1.0, math.pi * gamma**4 / 16
    k = kelvin(gamma)
    skin = gamma / 2 * (k.ber0 * k.bei0_prime - k.bei0 * k.ber0_prime) / (
        k.ber0_prime**2 + k.bei0_prime**2
    )
    proximity = -math.pi * gamma * (k.ber2 * k.ber0_prime + k.bei2 * k.bei0_prime) / (
        k.ber0**2 + k.bei0**2
    )
    return skin, proximity


def ac_parasitic_resistance(coil: Coil, f: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Parasitic resistance ``R_skin + R_proximity`` at frequency ``f``."""
    delta = skin_depth(f, coil.wire.conductivity_sigma, constants)
    gamma = coil.wire.diameter_w / (delta * math.sqrt(2))
    skin, proximity = ac_resistance_factors(gamma)
    return dc_resistance(coil) * (skin + proximity)


@dataclass(frozen=True)
class ResonantElement:
    """A coil tuned by a series capacitor to ``f0``, with its loss at ``f0``."""

    coil: Coil
    self_l: float
    tuning_c: float
    r_parasitic: float
    f0: float
    constants: PhysicalConstants = DEFAULT_CONSTANTS

    def __post_init__(self):
        if not (self.self_l > 0 and self.tuning_c > 0 and self.r_parasitic > 0):
            raise ValueError("resonant element needs positive L, C and R")
        w = 2 * math.pi * self.f0
        if abs(w * w * self.self_l * self.tuning_c - 1.0) > 1e-12:
            raise ValueError("element is not tuned to f0")

    @classmethod
    def from_coil(cls, coil: Coil, f0: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> "ResonantElement":
        l = self_inductance(coil)
        return cls(
            coil=coil,
            self_l=l,
            tuning_c=tuning_capacitance(l, f0),
            r_parasitic=ac_parasitic_resistance(coil, f0, constants),
            f0=f0,
            constants=constants,
        )

    @property
    def radii(self):
        return turn_radii(self.coil)

    def resistance_at(self, f: float) -> float:
        if f == self.f0:
            return self.r_parasitic
        return ac_parasitic_resistance(self.coil, f, self.constants)
