"""
Coil geometry, inductance and coupling
=======================================

Builds the coils of the symmetric chain, prints their self inductances and
tuning capacitors, then shows how the TX-spiral/IC coupling falls off with
separation for a few relay sizes.
"""

# %%
import numpy as np

from relaycoil import LoopCoil, SpiralCoil, WireSpec
from relaycoil import electromagnetics as em

wire = WireSpec()  # 20 AWG copper
f0 = 13.56e6

coils = {
    "loop 38 mm": LoopCoil(0.038, wire),
    "spiral 50 mm": SpiralCoil(0.050, 7, 0.5e-3, wire),
    "spiral 100 mm": SpiralCoil(0.100, 7, 0.5e-3, wire),
}
for name, c in coils.items():
    l = em.self_inductance(c)
    print(f"{name:<14} L = {l * 1e6:7.3f} uH   C = {em.tuning_capacitance(l, f0) * 1e12:8.2f} pF")

# %%
# coupling between a 50 mm spiral and relays of several sizes
tx = coils["spiral 50 mm"]
for od in (0.03, 0.1, 0.2):
    ic = SpiralCoil(od, 7, 0.5e-3, wire)
    ks = [
        em.coupling_coefficient(em.coil_mutual_inductance(tx, ic, d), em.self_inductance(tx), em.self_inductance(ic))
        for d in (0.01, 0.025, 0.05, 0.075, 0.1)
    ]
    print(f"IC {od * 1e3:3.0f} mm: " + "  ".join(f"{k:.4f}" for k in ks))

# %%
# far from the coil the filament sum approaches the dipole law, slowly:
# the leading correction is of order (r/d)^2
r = 0.025
for ratio in (5, 10, 20, 40):
    d = ratio * r
    m = em.mutual_inductance([r], [r], d)
    dip = em.MU0 * np.pi * r**4 / (2 * d**3)
    print(f"d = {ratio:2d} r: exact/dipole = {m / dip:.5f}")
