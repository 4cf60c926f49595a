import math

import numpy as np
import pytest

from cavimode import (
    ConfigError,
    MechanicalSpec,
    SPEED_OF_LIGHT,
    empty_cavity_finesse,
    exact_shift,
    finesse_closed_form,
    finesse_numeric,
    g_over_kappa,
    kappa_from_finesse,
    transmission_closed_form,
)

from conftest import LENGTH, WAVELENGTH, inner_resonance_separation, make_config

MECH = MechanicalSpec(mass_kg=2e-12, omega_m=9.4e5, quality_factor=1e6)


def test_empty_cavity_matches_formula(standard_mode):
    cfg = make_config(rm=0.0)
    rep = finesse_numeric(cfg, standard_mode)
    assert rep.finesse_numeric == pytest.approx(
        empty_cavity_finesse(0.9999), rel=1e-3)
    assert rep.tc_max == pytest.approx(1.0, abs=1e-9)
    assert rep.lorentzian_ok


def test_kappa_round_trip():
    fin = 31415.0
    kappa = kappa_from_finesse(LENGTH, fin)
    assert kappa * (2 * LENGTH * fin) / (math.pi * SPEED_OF_LIGHT) == pytest.approx(
        1.0, rel=1e-15)


def test_closed_form_matches_lorentzian_width(standard_mode):
    rng = np.random.default_rng(31)
    for _ in range(8):
        cfg = make_config(
            rm=rng.uniform(0.0, 0.95),
            phi=rng.uniform(-math.pi / 4, math.pi / 4),
            q=rng.uniform(8, 15) * WAVELENGTH,
        )
        rep = finesse_numeric(cfg, standard_mode)
        assert rep.finesse_closed == pytest.approx(rep.finesse_numeric, rel=0.01)


def test_closed_form_refuses_off_centre(standard_mode):
    cfg = make_config(rm=0.5, com=0.3 * WAVELENGTH)
    with pytest.raises(ConfigError):
        finesse_closed_form(cfg, standard_mode)
    rep = finesse_numeric(cfg, standard_mode)
    assert rep.finesse_closed is None


def test_peak_transmission_is_unity_at_centre(standard_mode):
    cfg = make_config(rm=0.9, q=10.3 * WAVELENGTH)
    rep = finesse_numeric(cfg, standard_mode)
    assert rep.tc_max == pytest.approx(1.0, abs=1e-6)


def test_lorentzian_shape_quality(standard_mode):
    # within one half-width of the peak the Lorentzian fit holds to 2%
    for rm in (0.0, 0.5, 0.9):
        cfg = make_config(rm=rm, q=10.3 * WAVELENGTH)
        rep = finesse_numeric(cfg, standard_mode)
        k0 = rep.k_resonance
        coeffs = cfg.membrane_at(k0)
        lprime = LENGTH + 2 * coeffs.phi / (standard_mode * math.pi / LENGTH)
        beta_k = rep.beta_halfwidth / lprime
        for f in np.linspace(-1.0, 1.0, 21):
            dk = f * beta_k
            lorentz = rep.tc_max / (1.0 + (dk * lprime / rep.beta_halfwidth) ** 2)
            actual = transmission_closed_form(cfg, k0 + dk)
            assert actual == pytest.approx(lorentz, rel=0.02)


def test_finesse_unchanged_at_strong_coupling_point(standard_mode):
    # R_m = 0.999 < R at the coupling-optimal separation: width unchanged
    cfg = make_config(rm=0.999,
                      q=inner_resonance_separation(standard_mode) + 0.01 * WAVELENGTH)
    rep = finesse_numeric(cfg, standard_mode)
    assert 0.95 <= rep.finesse_numeric / rep.finesse_empty <= 1.05


def test_linewidth_narrowing_at_exact_inner_resonance(standard_mode):
    # exactly on the inner-cavity resonance the mode hybridizes with the
    # inner cavity and the true frequency linewidth collapses; the
    # frozen-slow-phase closed form does not capture this
    cfg = make_config(rm=0.999, q=10.5 * WAVELENGTH)
    rep = finesse_numeric(cfg, standard_mode)
    assert rep.finesse_numeric > 2.0 * rep.finesse_empty
    assert rep.finesse_closed == pytest.approx(rep.finesse_empty, rel=0.01)


def test_asymmetry_flag_raised_when_peak_skews(standard_mode):
    cfg = make_config(rm=0.999, q=10.5 * WAVELENGTH + 0.2 * WAVELENGTH)
    rep = finesse_numeric(cfg, standard_mode)
    assert rep.asymmetry > 0.05
    assert not rep.lorentzian_ok


def test_g_over_kappa_reference_point(standard_mode):
    cfg = make_config(rm=0.998, q=inner_resonance_separation(standard_mode, half_waves=19))
    figures = g_over_kappa(cfg, standard_mode, MECH, finesse=4e4)
    assert 0.8 <= figures.g_max_over_kappa <= 1.3
    assert figures.double_single_ratio == LENGTH / (2 * cfg.separation_m)
    doubled = g_over_kappa(cfg, standard_mode, MECH, finesse=8e4)
    assert doubled.g_max_over_kappa == pytest.approx(
        2 * figures.g_max_over_kappa, rel=1e-9)


def test_measured_finesse_feeds_kappa(standard_mode):
    cfg = make_config(rm=0.5)
    rep = finesse_numeric(cfg, standard_mode)
    assert rep.kappa == pytest.approx(
        kappa_from_finesse(LENGTH, rep.finesse_numeric), rel=1e-12)
    sol = exact_shift(cfg, standard_mode)
    assert rep.k_resonance == pytest.approx(sol.k, rel=1e-12)
