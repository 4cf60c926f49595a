import math

import numpy as np
import pytest

from cavimode import (
    CavityConfig,
    ConfigError,
    MembraneSpec,
    denominator_parts,
    solve_fields,
    transmission_closed_form,
)

from conftest import LENGTH, WAVELENGTH, make_config


def random_config(rng, r_range=(0.5, 0.9999), rm_max=0.999):
    return make_config(
        rm=rng.uniform(0.0, rm_max),
        phi=rng.uniform(-math.pi / 2, math.pi / 2),
        com=rng.uniform(-10, 10) * WAVELENGTH,
        q=rng.uniform(2, 50) * WAVELENGTH,
        mirror=rng.uniform(*r_range),
    )


def random_k(rng):
    k_c = 2 * math.pi / WAVELENGTH
    return k_c + rng.uniform(-math.pi / LENGTH, math.pi / LENGTH)


def test_empty_cavity_resonance_transmits_fully():
    cfg = make_config(rm=0.0, mirror=0.9)
    k = 18797 * math.pi / LENGTH
    assert transmission_closed_form(cfg, k) == pytest.approx(1.0, abs=1e-9)
    assert solve_fields(cfg, k).transmitted_power == pytest.approx(1.0, abs=1e-9)


def test_empty_cavity_antiresonance():
    r = 0.9
    cfg = make_config(rm=0.0, mirror=r)
    k = (18797 + 0.5) * math.pi / LENGTH
    expected = (1 - r) ** 2 / (1 + r) ** 2
    assert transmission_closed_form(cfg, k) == pytest.approx(expected, rel=1e-10)


def test_linear_system_matches_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(300):
        cfg = random_config(rng)
        k = random_k(rng)
        t_fields = solve_fields(cfg, k).transmitted_power
        t_closed = transmission_closed_form(cfg, k)
        assert t_fields == pytest.approx(t_closed, rel=1e-10)


def test_energy_conservation():
    rng = np.random.default_rng(12)
    for _ in range(300):
        sol = solve_fields(random_config(rng), random_k(rng))
        assert sol.reflected_power + sol.transmitted_power == pytest.approx(
            1.0, abs=1e-10)


def test_denominator_decomposition_identity():
    rng = np.random.default_rng(13)
    for _ in range(300):
        parts = denominator_parts(random_config(rng), random_k(rng))
        assert parts.dsq_quadratic == pytest.approx(parts.dsq_direct, rel=1e-9)


def test_decomposition_with_membranes_absent():
    cfg = make_config(rm=0.0, mirror=0.9)
    rng = np.random.default_rng(14)
    for _ in range(20):
        k = random_k(rng)
        parts = denominator_parts(cfg, k)
        assert parts.a == 4 * 0.9
        assert parts.b == 0.0
        # |D|^2 reduces to the bare two-mirror denominator
        bare = abs(1 - 0.9 * np.exp(2j * (k * LENGTH % (2 * math.pi)))) ** 2
        assert parts.dsq_quadratic == pytest.approx(bare, rel=1e-7)


def test_quadratic_cross_term_vanishes_at_inner_node():
    rng = np.random.default_rng(15)
    for _ in range(20):
        k = random_k(rng)
        q = round(rng.uniform(5, 40)) * math.pi / k  # sin(kq) = 0
        cfg = make_config(rm=0.8, q=q)
        assert abs(denominator_parts(cfg, k).b) < 1e-8


def test_transmission_within_unit_interval():
    rng = np.random.default_rng(16)
    for _ in range(500):
        t = transmission_closed_form(random_config(rng), random_k(rng))
        # rounding at deep ultra-high-finesse resonances can poke ~1e-8 above 1
        assert -1e-12 <= t <= 1.0 + 1e-7


def test_transmission_periodic_in_com_offset():
    rng = np.random.default_rng(17)
    for _ in range(50):
        cfg = random_config(rng)
        k = random_k(rng)
        shifted = CavityConfig(
            length_m=cfg.length_m,
            mirror_reflectivity=cfg.mirror_reflectivity,
            membrane=cfg.membrane,
            com_offset_m=cfg.com_offset_m + math.pi / k,
            separation_m=cfg.separation_m,
            wavelength_m=cfg.wavelength_m,
        )
        assert transmission_closed_form(cfg, k) == pytest.approx(
            transmission_closed_form(shifted, k), rel=1e-8)


def test_effective_lengths_reported():
    cfg = make_config(rm=0.5, phi=0.3)
    k = 2 * math.pi / WAVELENGTH
    parts = denominator_parts(cfg, k)
    assert parts.lprime == pytest.approx(LENGTH + 2 * 0.3 / k, rel=1e-15)
    assert parts.qprime == pytest.approx(cfg.separation_m + 0.3 / k, rel=1e-15)


@pytest.mark.parametrize("kwargs", [
    dict(q=-1e-6),
    dict(q=0.02),                 # membranes outside the cavity
    dict(com=0.006, q=1e-5),      # |Q| + q/2 beyond a mirror
    dict(mirror=1.0),
    dict(mirror=0.0),
    dict(length=-0.01),
    dict(wavelength=0.0),
])
def test_invalid_configs_rejected(kwargs):
    with pytest.raises(ConfigError):
        make_config(**kwargs)
