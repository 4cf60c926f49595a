"""Strong-coupling summary: couplings, finesse, decay rate, cooperativity."""

from __future__ import annotations

import math
from dataclasses import replace

from .constants import SPEED_OF_LIGHT
from .coupling import (
    cooperativity,
    coupling_analytic,
    coupling_numeric,
    single_membrane_coupling,
    zero_point_motion,
)
from .errors import ConfigError, OutOfValidityError
from .finesse import finesse_numeric, kappa_from_finesse
from .modes import empty_mode
from .scan import ScanRequest


def resonant_separation(config, m: int) -> float:
    """Membrane separation of the nearest inner-cavity resonance.

    For mode parity matching the resonance condition this is where the
    coupling enhancement peaks: q' = n pi / k0 with n = m (mod 2).
    """
    k0 = empty_mode(m, config.length_m)
    phi = config.membrane_at(k0).phi
    target = (k0 * config.separation_m + phi) / math.pi
    n = round(target)
    if n % 2 != m % 2:
        n += 1 if target > n else -1
    return (n * math.pi - phi) / k0


def strong_coupling_report(request: ScanRequest) -> dict:
    """Everything the strong-coupling figure of merit needs, as one dict.

    The numeric coupling is evaluated at the inner-cavity resonance nearest
    the requested separation (where the enhancement peaks); caps and the
    double-vs-single enhancement use the requested separation as stated.
    """
    if request.mech is None:
        raise ConfigError("strong-coupling report needs mechanical parameters")
    config = request.config
    mech = request.mech
    m = request.resolved_mode_index
    k0 = empty_mode(m, config.length_m)
    omega0 = SPEED_OF_LIGHT * k0
    xz = zero_point_motion(mech)

    q_req = config.separation_m
    q_star = resonant_separation(config, m)
    at_peak = replace(config, separation_m=q_star)

    if request.finesse_override is not None:
        fin = request.finesse_override
    else:
        fin = finesse_numeric(at_peak, m).finesse_numeric
    kappa = kappa_from_finesse(config.length_m, fin)

    g_q = coupling_numeric(at_peak, m, mech, "relative")
    try:
        g_analytic = coupling_analytic(at_peak, m, mech)
    except OutOfValidityError:
        g_analytic = None
    g_max_req = omega0 * xz / q_req
    g_max_star = omega0 * xz / q_star

    c0 = None
    if mech.gamma_m is not None:
        c0 = cooperativity(g_q, kappa, mech)

    return {
        "mode_index": m,
        "cavity_length_m": config.length_m,
        "wavelength_m": config.wavelength_m,
        "mirror_reflectivity": config.mirror_reflectivity,
        "membrane_reflectivity": config.membrane_at(k0).reflectivity,
        "separation_requested_m": q_req,
        "separation_resonant_m": q_star,
        "x_zpm_m": xz,
        "omega0_rad_s": omega0,
        "g_q_rad_s": g_q,
        "g_q_analytic_rad_s": g_analytic,
        "g_sing_rad_s": single_membrane_coupling(at_peak, m, mech),
        "g_q_max_rad_s": g_max_req,
        "g_q_max_resonant_rad_s": g_max_star,
        "g_q_over_cap": abs(g_q) / g_max_star,
        "enhancement_L_over_2q": config.length_m / (2.0 * q_req),
        "finesse": fin,
        "kappa_rad_s": kappa,
        "g_over_kappa": abs(g_q) / kappa,
        "g_max_over_kappa": g_max_req / kappa,
        "cooperativity": c0,
    }
