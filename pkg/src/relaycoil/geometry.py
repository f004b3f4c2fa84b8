"""
Coil winding geometry.

All lengths are SI meters. Spiral coils are specified by their outer
diameter; per-turn radii and the inner diameter are derived from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# annealed copper
COPPER_CONDUCTIVITY = 5.8e7
# 20 AWG bare conductor
AWG20_DIAMETER = 0.8128e-3


@dataclass(frozen=True)
class WireSpec:
    """Round conductor: diameter (m) and conductivity (S/m)."""

    diameter_w: float = AWG20_DIAMETER
    conductivity_sigma: float = COPPER_CONDUCTIVITY

    def __post_init__(self):
        if not self.diameter_w > 0:
            raise ValueError(f"wire diameter must be positive, got {self.diameter_w}")
        if not self.conductivity_sigma > 0:
            raise ValueError(f"wire conductivity must be positive, got {self.conductivity_sigma}")


@dataclass(frozen=True)
class LoopCoil:
    """Single-turn loop of outer diameter `od`."""

    od: float
    wire: WireSpec = WireSpec()

    def __post_init__(self):
        if not self.od > self.wire.diameter_w:
            raise ValueError(
                f"loop od ({self.od}) must exceed the wire diameter ({self.wire.diameter_w})"
            )

    @property
    def turns_n(self) -> int:
        return 1

    @property
    def id(self) -> float:
        return self.od


@dataclass(frozen=True)
class SpiralCoil:
    """
    Single-layer planar spiral.

    Parameters
    ----------
    od : float
        Outer diameter (m), measured to the outermost turn.
    turns_n : int
        Number of turns.
    pitch_p : float
        Gap between adjacent turns (m). Turn-to-turn spacing is ``w + p``.
    wire : WireSpec
    """

    od: float
    turns_n: int
    pitch_p: float
    wire: WireSpec = WireSpec()

    def __post_init__(self):
        if int(self.turns_n) != self.turns_n or self.turns_n < 1:
            raise ValueError(f"turns_n must be a positive integer, got {self.turns_n}")
        if self.pitch_p < 0:
            raise ValueError(f"pitch_p must be >= 0, got {self.pitch_p}")
        if not self.id > 0:
            raise ValueError(
                f"spiral with od={self.od}, N={self.turns_n}, w+p={self.spacing} "
                f"has nonpositive inner diameter {self.id}"
            )

    @property
    def spacing(self) -> float:
        """Center-to-center distance between adjacent turns (w + p)."""
        return self.wire.diameter_w + self.pitch_p

    @property
    def id(self) -> float:
        return self.od - 2 * (self.turns_n - 1) * self.spacing


Coil = Union[LoopCoil, SpiralCoil]


def turn_radii(coil: Coil) -> np.ndarray:
    """
    Radius of every turn, innermost first.

    ``r[0] = ID/2`` and ``r[-1] = OD/2``; neighbours differ by ``w + p``.
    A loop returns its single radius ``OD/2``.
    """
    if isinstance(coil, LoopCoil):
        return np.array([coil.od / 2])
    n = coil.turns_n
    i = np.arange(1, n + 1)
    r = coil.od / 2 - (n - i) * coil.spacing
    if r[0] <= 0:
        raise ValueError(f"derived inner radius {r[0]} is not positive")
    return r


def wire_length(coil: Coil) -> float:
    """Conductor length, ``N*pi*(OD + ID)/2``; a loop reduces to ``pi*OD``."""
    return 0.5 * coil.turns_n * math.pi * (coil.od + coil.id)
