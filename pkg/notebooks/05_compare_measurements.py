"""
Comparing against measured data
===============================

Writes a heatmap CSV, perturbs it to stand in for bench data, reads it
back as a measurement file and reports the per-size residuals.
"""

# %%
import tempfile
from pathlib import Path

import numpy as np

from relaycoil import csvio, load_preset, size_location_heatmap
from relaycoil.sweep import MeasurementSeries, compare_with_measurement

cfg = load_preset("asymmetric")
hm = size_location_heatmap(cfg.system, [0.08, 0.12, 0.16])

# %%
# synthetic "bench" data: values with 2% multiplicative noise
rng = np.random.default_rng(1)
sim = MeasurementSeries.from_heatmap(hm)
bench = MeasurementSeries(sim.ic_od, sim.location, np.clip(sim.s21_mag * rng.normal(1, 0.02, len(sim)), 0, 1))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "bench.csv"
    with path.open("w") as fh:
        fh.write(",".join(csvio.HEATMAP_HEADER) + "\n")
        for od, loc, v in zip(bench.ic_od, bench.location, bench.s21_mag):
            fh.write(f"{csvio.fmt(od * 1e3)},{csvio.fmt(loc * 1e3)},{csvio.fmt(v)}\n")
    measured = csvio.read_measurement_csv(path)

# %%
report = compare_with_measurement(hm, measured)
for row in report.rows:
    print(
        f"OD {row.ic_od * 1e3:3.0f} mm: simulated {row.sim_location * 1e3:6.2f} mm, "
        f"measured {row.meas_location * 1e3:6.2f} mm ({row.location_delta_pct:+.2f}% of span)"
    )
print(f"rms |S21| difference: {report.rms_s21_delta:.4f}")
