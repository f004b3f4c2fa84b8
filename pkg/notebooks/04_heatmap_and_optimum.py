"""
Relay size and location
=======================

The size-by-location heatmap for both presets, the equal-coupling and
max-|S21| locations for each relay size, and the resulting best size.
"""

# %%
import time

import numpy as np

from relaycoil import load_preset, optimal_size_scan, size_location_heatmap

for name in ("symmetric", "asymmetric"):
    cfg = load_preset(name)
    t = time.perf_counter()
    hm = size_location_heatmap(cfg.system, cfg.sweep.od_list, cfg.sweep.locations)
    print(f"{name}: {hm.values.shape} heatmap in {time.perf_counter() - t:.2f} s")
    best = hm.row_argmax()
    for od, loc, row in zip(hm.od_axis[::3], best[::3], hm.values[::3]):
        print(f"  OD {od * 1e3:3.0f} mm: best grid location {loc * 1e3:6.2f} mm, |S21| {np.nanmax(row):.4f}")

# %%
for name in ("symmetric", "asymmetric"):
    cfg = load_preset(name)
    od_star, reports = optimal_size_scan(cfg.system, cfg.sweep.od_list)
    print(f"\n{name}: best OD {od_star * 1e3:.0f} mm (reference {cfg.sweep.reference_optimum_od * 1e3:.0f} mm)")
    print("  OD   equal-k   max-S21   |S21|")
    for r in reports:
        print(f"  {r.ic_od * 1e3:3.0f}  {r.loc_equal_coupling * 1e3:7.2f}  {r.loc_max_s21 * 1e3:7.2f}  {r.s21_at_max:.4f}")
