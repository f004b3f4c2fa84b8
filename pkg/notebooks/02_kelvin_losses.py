"""
Skin and proximity losses
=========================

Evaluates the Kelvin-function loss factors across frequency for 20 AWG
wire and shows where the parasitic resistance of a spiral ends up at the
operating frequency.
"""

# %%
import numpy as np

from relaycoil import SpiralCoil, WireSpec
from relaycoil import electromagnetics as em
from relaycoil.kelvin import kelvin

wire = WireSpec()

for f in (1e3, 1e5, 1e6, 13.56e6, 30e6):
    gamma = wire.diameter_w / (em.skin_depth(f, wire.conductivity_sigma) * np.sqrt(2))
    skin, prox = em.ac_resistance_factors(gamma)
    print(f"f = {f:10.4g} Hz  gamma = {gamma:8.3f}  skin = {skin:9.4f}  proximity = {prox:9.4f}")

# %%
k = kelvin(32.0)
print("ber0, bei0 at 32:", k.ber0, k.bei0)

# %%
for od in (0.03, 0.05, 0.1, 0.2):
    c = SpiralCoil(od, 7, 0.5e-3, wire)
    print(
        f"spiral {od * 1e3:3.0f} mm: R_dc = {em.dc_resistance(c) * 1e3:6.2f} mOhm, "
        f"R_p(13.56 MHz) = {em.ac_parasitic_resistance(c, 13.56e6):6.3f} Ohm"
    )
