"""Five-coil magnetic-resonant wireless power transfer: circuit model and relay-coil placement."""

from .geometry import LoopCoil, SpiralCoil, WireSpec, turn_radii, wire_length
from .kelvin import KelvinEval, kelvin
from .electromagnetics import (
    PhysicalConstants,
    ResonantElement,
    ac_parasitic_resistance,
    coupling_coefficient,
    dc_resistance,
    mutual_inductance,
    self_inductance,
    self_inductance_loop,
    self_inductance_spiral,
    skin_depth,
    tuning_capacitance,
)
from .network import (
    SystemConfig,
    build_impedance_matrix,
    build_system,
    frequency_sweep,
    s21,
    solve_mesh_currents,
    voltage_gain_closed_form,
)
from .sweep import (
    Heatmap,
    MeasurementSeries,
    OptimumReport,
    compare_with_measurement,
    find_equal_coupling_location,
    find_max_s21_location,
    location_sweep,
    optimal_size_scan,
    size_location_heatmap,
)
from .config import load_config, load_preset, parse_config

__version__ = "0.1.0"
