"""Cavity finesse with the membranes inside.

The transmission peak around a solved resonance is characterized as a
Lorentzian T(delta') ~ Tmax * beta^2 / (beta^2 + delta'^2) in the phase
detuning delta' = (k - k_res) L'; the finesse is pi / (2 beta) and the decay
rate follows from kappa = pi c / (2 L F).  The half-width beta is measured by
bisection on both flanks; a closed-form finesse exists for membranes centred
in the cavity (Q = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .constants import SPEED_OF_LIGHT
from .coupling import MechanicalSpec, coupling_numeric, zero_point_motion
from .errors import ConfigError, PeakOverlapError
from .modes import ModeSolution, empty_mode, exact_shift
from .phases import cos_phase, sin_phase
from .transfer import CavityConfig, transmission_closed_form


@dataclass(frozen=True)
class FinesseReport:
    """Peak characterization of one mode.

    ``beta_halfwidth`` is the Lorentzian half-width at half maximum in phase
    units (kL'); ``asymmetry`` the relative mismatch of the two measured
    flank half-widths.  ``lorentzian_ok`` is cleared when the asymmetry
    exceeds 5%, flagging that the Lorentzian picture is breaking down.
    ``finesse_closed`` is None unless the membranes are centred (Q = 0).
    """

    finesse_numeric: float
    finesse_closed: float | None
    finesse_empty: float
    beta_halfwidth: float
    kappa: float
    tc_max: float
    asymmetry: float
    lorentzian_ok: bool
    k_resonance: float


@dataclass(frozen=True)
class StrongCouplingFigures:
    """g/kappa figures of merit for one configuration."""

    g_q: float
    g_q_max: float
    finesse: float
    kappa: float
    g_over_kappa: float
    g_max_over_kappa: float
    double_single_ratio: float  # L / (2q)


def empty_cavity_finesse(mirror_reflectivity: float) -> float:
    """pi sqrt(R) / (1 - R)."""
    return math.pi * math.sqrt(mirror_reflectivity) / (1.0 - mirror_reflectivity)


def kappa_from_finesse(length_m: float, finesse: float) -> float:
    """Cavity amplitude decay rate pi c / (2 L F)."""
    return math.pi * SPEED_OF_LIGHT / (2.0 * length_m * finesse)


def _half_width(config: CavityConfig, k_res: float, t_half: float,
                lprime: float, side: int) -> float:
    """Distance (in k) from the peak to the half-maximum on one flank."""
    quarter_fsr = 0.5 * math.pi / lprime
    step = (1.0 - config.mirror_reflectivity) / (2.0 * lprime) / 1024.0
    prev = 0.0
    while step <= quarter_fsr:
        if transmission_closed_form(config, k_res + side * step) <= t_half:
            break
        prev = step
        step *= 2.0
    else:
        raise PeakOverlapError(
            "half maximum not reached within a quarter free spectral range"
        )
    lo = prev if prev > 0.0 else step / 2.0
    if transmission_closed_form(config, k_res + side * lo) <= t_half:
        lo = 0.0
    root = brentq(
        lambda d: transmission_closed_form(config, k_res + side * d) - t_half,
        lo, step, xtol=1e-18 * k_res, rtol=8.9e-16,
    )
    return float(root)


def finesse_numeric(
    config: CavityConfig, m: int, *, near_k: float | None = None,
    solution: ModeSolution | None = None,
) -> FinesseReport:
    """Locate the mode-m peak and measure its Lorentzian half-width."""
    if solution is None:
        solution = exact_shift(config, m, near_k=near_k)
    k_res = solution.k
    k0 = solution.k0
    coeffs = config.membrane_at(k0)
    lprime = config.length_m + 2.0 * coeffs.phi / k0
    t_peak = transmission_closed_form(config, k_res)
    t_half = 0.5 * t_peak
    w_hi = _half_width(config, k_res, t_half, lprime, +1)
    w_lo = _half_width(config, k_res, t_half, lprime, -1)
    beta = 0.5 * (w_hi + w_lo) * lprime
    asymmetry = abs(w_hi - w_lo) * lprime / beta
    fin = math.pi / (2.0 * beta)
    closed = None
    if config.com_offset_m == 0.0:
        closed = finesse_closed_form(config, m, k_res=k_res)
    return FinesseReport(
        finesse_numeric=fin,
        finesse_closed=closed,
        finesse_empty=empty_cavity_finesse(config.mirror_reflectivity),
        beta_halfwidth=beta,
        kappa=kappa_from_finesse(config.length_m, fin),
        tc_max=t_peak,
        asymmetry=asymmetry,
        lorentzian_ok=asymmetry <= 0.05,
        k_resonance=k_res,
    )


def finesse_closed_form(
    config: CavityConfig, m: int, *, k_res: float | None = None
) -> float:
    """Closed-form finesse for membranes centred in the cavity (Q = 0).

    Evaluated at the solved resonance phase delta_m = k L' (the membranes
    shift the resonance away from m*pi).  Refuses off-centre configurations,
    for which no closed form is implemented.
    """
    if config.com_offset_m != 0.0:
        raise ConfigError("closed-form finesse requires centred membranes (Q = 0)")
    if k_res is None:
        k_res = exact_shift(config, m).k
    coeffs = config.membrane_at(empty_mode(m, config.length_m))
    big_r = config.mirror_reflectivity
    rm = coeffs.reflectivity
    phi = coeffs.phi
    length = config.length_m
    q = config.separation_m
    # 2 delta_m = 2kL + 4 phi ; 2 delta_m - 2kq' = 2k(L - q) + 2 phi ;
    # 2 delta_m - 4kq' = 2k(L - 2q)
    s_kq = sin_phase(k_res, q, phi)
    radicand = (
        big_r * rm * rm * cos_phase(k_res, 2.0 * (length - 2.0 * q))
        - 2.0 * big_r * rm * cos_phase(k_res, 2.0 * (length - q), 2.0 * phi)
        + big_r * cos_phase(k_res, 2.0 * length, 4.0 * phi)
        + (1.0 + big_r) ** 2 * rm * s_kq * s_kq
    )
    if radicand < 0.0:
        raise ConfigError(
            f"closed-form finesse undefined here (negative radicand {radicand:.3e})"
        )
    return math.pi * math.sqrt(radicand) / ((1.0 - big_r) * (1.0 - rm))


def g_over_kappa(
    config: CavityConfig,
    m: int,
    mech: MechanicalSpec,
    *,
    finesse: float | None = None,
) -> StrongCouplingFigures:
    """Coupling over decay rate, numerically and at the saturation cap.

    ``finesse`` overrides the measured value (useful to model a cavity of
    stated finesse without tying it to the mirror reflectivity).
    """
    if finesse is None:
        finesse = finesse_numeric(config, m).finesse_numeric
    kappa = kappa_from_finesse(config.length_m, finesse)
    g_q = coupling_numeric(config, m, mech, "relative")
    k0 = empty_mode(m, config.length_m)
    g_max = (SPEED_OF_LIGHT * k0 / config.separation_m) * zero_point_motion(mech)
    return StrongCouplingFigures(
        g_q=g_q,
        g_q_max=g_max,
        finesse=finesse,
        kappa=kappa,
        g_over_kappa=abs(g_q) / kappa,
        g_max_over_kappa=g_max / kappa,
        double_single_ratio=config.length_m / (2.0 * config.separation_m),
    )
