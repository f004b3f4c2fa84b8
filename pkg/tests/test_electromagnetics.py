import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import coaxial_loops_exact, kelvin_reference, neumann_brute_force
from relaycoil import electromagnetics as em
from relaycoil.geometry import LoopCoil, SpiralCoil, WireSpec, turn_radii, wire_length

W20 = WireSpec()
F0 = 13.56e6


def test_spiral_inductance_golden():
    # od 50 mm, N 7, w+p 1.5 mm; frozen from a 40-digit evaluation of the formula
    c = SpiralCoil(0.050, 7, 1.5e-3 - W20.diameter_w, W20)
    assert em.self_inductance_spiral(c) == pytest.approx(2.7513026348263254e-06, rel=1e-12)


@given(scale=st.floats(0.2, 5.0))
def test_spiral_inductance_scales_linearly(scale):
    base = SpiralCoil(0.05, 7, 0.5e-3, WireSpec(0.8e-3))
    scaled = SpiralCoil(0.05 * scale, 7, 0.5e-3 * scale, WireSpec(0.8e-3 * scale))
    assert em.self_inductance_spiral(scaled) == pytest.approx(scale * em.self_inductance_spiral(base), rel=1e-12)


def test_spiral_inductance_rejects_degenerate_core():
    # ID > 0 but OD - N(w+p) <= 0 only happens for a single turn with w+p >= OD
    c = SpiralCoil(0.030, 1, 0.031, W20)
    assert c.id > 0
    with pytest.raises(ValueError):
        em.self_inductance_spiral(c)


def test_loop_inductance_golden():
    assert em.self_inductance_loop(LoopCoil(0.038, W20)) == pytest.approx(8.311631728445872e-08, rel=1e-12)


def test_loop_inductance_uniform_scaling():
    a = em.self_inductance_loop(LoopCoil(0.038, W20))
    b = em.self_inductance_loop(LoopCoil(0.076, WireSpec(2 * W20.diameter_w)))
    assert b == pytest.approx(2 * a, rel=1e-14)


def test_loop_inductance_nonpositive_rejected():
    w = 1e-3
    od = w * math.exp(1.75) / 4  # ln(4 od / w) = 1.75
    with pytest.raises(ValueError):
        em.self_inductance_loop(LoopCoil(od * 1.0000001 if od <= w else od, WireSpec(w)))


def test_dipole_example_quadrature_vs_exact():
    m = em.mutual_inductance([0.025], [0.025], 0.25)
    assert m == pytest.approx(coaxial_loops_exact(0.025, 0.025, 0.25), rel=1e-9)


def test_mutual_far_field_vanishes_monotonically():
    r = [0.02, 0.025]
    ds = np.geomspace(1e-3, 250.0, 40)
    m = [em.mutual_inductance(r, r, d) for d in ds]
    assert all(a > b for a, b in zip(m, m[1:]))
    assert m[-1] < 1e-9 * m[0]


def test_mutual_matches_brute_force_neumann():
    rng = np.random.default_rng(7)
    for _ in range(10):
        ra, rb = rng.uniform(0.005, 0.1, 2)
        d = rng.uniform(0.1, 2.0) * max(ra, rb)
        expected = neumann_brute_force(ra, rb, d)
        assert em.mutual_inductance([ra], [rb], d) == pytest.approx(expected, rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(
    ra=st.lists(st.floats(0.003, 0.12), min_size=1, max_size=4),
    rb=st.lists(st.floats(0.003, 0.12), min_size=1, max_size=4),
    d=st.floats(1e-4, 0.3),
)
def test_reciprocity_bitwise(ra, rb, d):
    assert em.mutual_inductance(ra, rb, d) == em.mutual_inductance(rb, ra, d)


def test_multi_turn_is_sum_of_pairs():
    ra, rb, d = [0.01, 0.02], [0.015, 0.03, 0.04], 0.02
    total = sum(coaxial_loops_exact(a, b, d) for a in ra for b in rb)
    assert em.mutual_inductance(ra, rb, d) == pytest.approx(total, rel=1e-8)


def test_near_singular_configuration():
    # almost coincident turns: adaptive refinement still converges
    m = em.mutual_inductance([0.025], [0.02501], 1e-5)
    assert m == pytest.approx(coaxial_loops_exact(0.025, 0.02501, 1e-5), rel=1e-7)


def test_singular_configuration_rejected():
    with pytest.raises(ValueError, match="singular"):
        em.mutual_inductance([0.02, 0.025], [0.025], 0.0)


def test_quadrature_failure_reported(monkeypatch):
    monkeypatch.setattr(em, "QUAD_LIMIT", 1)
    em._turn_pair.cache_clear()
    try:
        with pytest.raises(em.QuadratureError):
            em.mutual_inductance([0.025], [0.0250001], 1e-7)
    finally:
        em._turn_pair.cache_clear()


def test_coupling_coefficient():
    assert em.coupling_coefficient(0.0, 1e-6, 2e-6) == 0.0
    assert em.coupling_coefficient(5e-9, 500e-9, 500e-9) == pytest.approx(0.01)
    with pytest.raises(ValueError):
        em.coupling_coefficient(1e-9, 0.0, 1e-6)


def test_perfect_coupling_limit():
    l = em.self_inductance_loop(LoopCoil(0.05, W20))
    assert em.coupling_coefficient(l, l, l) == 1.0


@settings(max_examples=40, deadline=None)
@given(od_a=st.floats(0.02, 0.25), od_b=st.floats(0.02, 0.25), d=st.floats(2e-3, 0.3))
def test_coupling_in_unit_interval(od_a, od_b, d):
    a = SpiralCoil(od_a, 7, 0.5e-3, W20)
    b = SpiralCoil(od_b, 7, 0.5e-3, W20)
    m = em.coil_mutual_inductance(a, b, d)
    k = em.coupling_coefficient(m, em.self_inductance(a), em.self_inductance(b))
    assert 0 < k < 1


def test_tuning_capacitance():
    c = em.tuning_capacitance(1e-6, F0)
    assert c == pytest.approx(137.75928632813217e-12, rel=1e-12)
    f = 1 / (2 * math.pi * math.sqrt(1e-6 * c))
    assert f == pytest.approx(F0, rel=1e-14)
    assert em.tuning_capacitance(2e-6, F0) == pytest.approx(c / 2, rel=1e-15)
    with pytest.raises(ValueError):
        em.tuning_capacitance(0.0, F0)


def test_skin_depth():
    assert em.skin_depth(F0, 5.8e7) == pytest.approx(17.94635647686562e-6, rel=1e-12)
    assert em.skin_depth(4 * F0, 5.8e7) == pytest.approx(em.skin_depth(F0, 5.8e7) / 2, rel=1e-14)
    assert em.skin_depth(1.0, 5.8e7) == pytest.approx(66.1e-3, rel=1e-3)
    with pytest.raises(ValueError):
        em.skin_depth(-1.0, 5.8e7)


class _FixedLength:
    """Stand-in coil with a prescribed conductor length."""

    def __init__(self, length, wire):
        self.wire = wire
        self.turns_n = 1
        self.od = length / math.pi
        self.id = self.od


def test_dc_resistance():
    assert em.dc_resistance(_FixedLength(0.9676, W20)) == pytest.approx(0.03215219261127676, rel=1e-9)
    c = SpiralCoil(0.05, 7, 0.5e-3, W20)
    r = em.dc_resistance(c)
    assert r == pytest.approx(wire_length(c) / (W20.conductivity_sigma * math.pi * (W20.diameter_w / 2) ** 2))
    assert em.dc_resistance(_FixedLength(2 * 0.9676, W20)) == pytest.approx(2 * 0.03215219261127676, rel=1e-9)
    thick = WireSpec(2 * W20.diameter_w)
    assert em.dc_resistance(_FixedLength(0.9676, thick)) == pytest.approx(0.03215219261127676 / 4, rel=1e-9)


def test_low_frequency_limit_is_dc():
    c = SpiralCoil(0.05, 7, 0.5e-3, W20)
    assert em.ac_parasitic_resistance(c, 1e-3) == pytest.approx(em.dc_resistance(c), rel=1e-9)
    skin, prox = em.ac_resistance_factors(0.01)
    assert skin == pytest.approx(1.0, abs=1e-8)


def test_operating_point_factors_against_oracle():
    gamma = W20.diameter_w / (em.skin_depth(F0, W20.conductivity_sigma) * math.sqrt(2))
    assert gamma == pytest.approx(32.025, abs=1e-3)
    ber, bei, berp, beip, ber2, bei2 = kelvin_reference(gamma)
    skin_ref = gamma / 2 * (ber * beip - bei * berp) / (berp**2 + beip**2)
    prox_ref = -math.pi * gamma * (ber2 * berp + bei2 * beip) / (ber**2 + bei**2)
    skin, prox = em.ac_resistance_factors(gamma)
    assert skin == pytest.approx(skin_ref, rel=1e-9)
    assert prox == pytest.approx(prox_ref, rel=1e-9)
    # frozen from the 40-digit oracle
    assert skin == pytest.approx(11.5767667700671, rel=1e-9)
    assert prox == pytest.approx(69.5627459749573, rel=1e-9)
    c = SpiralCoil(0.05, 7, 0.5e-3, W20)
    assert em.ac_parasitic_resistance(c, F0) > em.dc_resistance(c)


def test_skin_factor_grows_linearly_at_large_gamma():
    s1, _ = em.ac_resistance_factors(40.0)
    s2, _ = em.ac_resistance_factors(80.0)
    assert (s2 - s1) / 40 == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-2)


def test_parasitic_resistance_monotone_in_frequency():
    c = SpiralCoil(0.05, 7, 0.5e-3, W20)
    r = [em.ac_parasitic_resistance(c, f) for f in np.geomspace(1e3, 30e6, 600)]
    assert all(b >= a for a, b in zip(r, r[1:]))


def test_resonant_element_tuned():
    for coil in (LoopCoil(0.038, W20), SpiralCoil(0.09, 7, 0.5e-3, W20)):
        el = em.ResonantElement.from_coil(coil, F0)
        w = 2 * math.pi * F0
        assert w * w * el.self_l * el.tuning_c == pytest.approx(1.0, rel=1e-12)
        assert el.r_parasitic > 0
        assert el.resistance_at(F0) == el.r_parasitic
        np.testing.assert_array_equal(el.radii, turn_radii(coil))


def test_resonant_element_rejects_detuned():
    el = em.ResonantElement.from_coil(LoopCoil(0.038, W20), F0)
    with pytest.raises(ValueError, match="tuned"):
        em.ResonantElement(el.coil, el.self_l, el.tuning_c * 1.01, el.r_parasitic, F0)
