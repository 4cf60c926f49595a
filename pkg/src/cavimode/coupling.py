"""Single-photon optomechanical couplings of the membrane pair.

The couplings are frequency pulls per zero-point displacement,
g_x = c * (d delta_k / d x) * x_zpm, for the relative coordinate q and the
centre-of-mass coordinate Q.  The numerical route differentiates the exact
resonance; the analytic route evaluates the near-resonance formula

    g_q = -[cos(2 k0 Q) + sqrt(R_m)] / (1 - R_m) * g_sing,
    g_sing = 2 sqrt(R_m) (omega0 / L) x_zpm,

valid close to an inner-cavity resonance and away from saturation.  The
coupling can never exceed the bare coupling of the inner cavity alone,
g_q_max = (omega0 / q) x_zpm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import HBAR, SPEED_OF_LIGHT
from .errors import ConfigError, NoRootInWindowError, OutOfValidityError, StencilBranchError
from .modes import empty_mode, exact_shift, mode_index_near, shift_equation_slope
from .phases import cos_phase
from .transfer import CavityConfig


@dataclass(frozen=True)
class MechanicalSpec:
    """Effective mass and frequency of one mechanical mode.

    Damping may be given directly (``gamma_m``) or via the quality factor
    (``gamma_m = omega_m / quality_factor``); it is only needed for
    cooperativities.
    """

    mass_kg: float
    omega_m: float
    gamma_m: float | None = None
    quality_factor: float | None = None

    def __post_init__(self):
        if self.mass_kg <= 0.0:
            raise ConfigError("mechanical mass must be positive")
        if self.omega_m <= 0.0:
            raise ConfigError("mechanical frequency must be positive")
        if self.gamma_m is None and self.quality_factor is not None:
            object.__setattr__(self, "gamma_m", self.omega_m / self.quality_factor)
        if self.gamma_m is not None and self.gamma_m <= 0.0:
            raise ConfigError("mechanical damping must be positive")


@dataclass(frozen=True)
class CouplingReport:
    """Couplings of one configuration, all in rad/s.

    ``g1``/``g2`` are the per-membrane couplings g_Q/2 -/+ g_q;
    ``g_q_analytic`` is NaN where the near-resonance formula is out of its
    validity domain (saturation regime).
    """

    g_q: float
    g_q_big: float  # CoM coupling g_Q
    g1: float
    g2: float
    g_sing: float
    g_q_max: float
    g_q_analytic: float
    enhancement: float  # cap over single-membrane coupling, L / (2q)
    x_zpm: float
    omega0: float


def zero_point_motion(mech: MechanicalSpec) -> float:
    """Ground-state positional spread sqrt(hbar / (M omega_m))."""
    return math.sqrt(HBAR / (mech.mass_kg * mech.omega_m))


def _shift_with(config: CavityConfig, m: int, coordinate: str, value: float,
                near_k: float | None):
    if coordinate == "relative":
        cfg = replace(config, separation_m=value)
    else:
        cfg = replace(config, com_offset_m=value)
    return exact_shift(cfg, m, near_k=near_k)


def coupling_numeric(
    config: CavityConfig,
    m: int,
    mech: MechanicalSpec,
    coordinate: str = "relative",
    *,
    step: float | None = None,
    max_retries: int = 3,
) -> float:
    """Coupling from central differences of the exact resonance.

    The default step resolves the narrow high-slope feature: for the
    relative coordinate it scales with the membrane transmission
    (1e-4 * lambda * T_m), for the CoM coordinate with the wavelength.
    A second evaluation at half step feeds a Richardson extrapolation.
    Stencils that jump between resonance branches (shift difference above
    pi/L) shrink the step and retry.
    """
    if coordinate not in ("relative", "com"):
        raise ConfigError(f"unknown coordinate {coordinate!r}")
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    if step is None:
        if coordinate == "relative":
            step = 1e-4 * config.wavelength_m * max(coeffs.transmissivity, 1e-12)
        else:
            step = 1e-4 * config.wavelength_m
    center = (
        config.separation_m if coordinate == "relative" else config.com_offset_m
    )
    anchor = exact_shift(config, m)
    jump_limit = math.pi / config.length_m

    def central(h: float) -> float:
        hi = _shift_with(config, m, coordinate, center + h, anchor.k)
        lo = _shift_with(config, m, coordinate, center - h, anchor.k)
        if abs(hi.delta_k - lo.delta_k) > jump_limit:
            raise StencilBranchError(
                f"stencil crossed a resonance branch at step {h:.3e}"
            )
        return (hi.delta_k - lo.delta_k) / (2.0 * h)

    last_err: Exception | None = None
    for _ in range(max_retries + 1):
        try:
            d1 = central(step)
            d2 = central(0.5 * step)
            slope = (4.0 * d2 - d1) / 3.0
            return SPEED_OF_LIGHT * slope * zero_point_motion(mech)
        except (StencilBranchError, NoRootInWindowError) as err:
            last_err = err
            step *= 0.1
    raise StencilBranchError(
        f"coupling stencil kept crossing branches down to step {step:.3e}"
    ) from last_err


def coupling_analytic(
    config: CavityConfig,
    m: int,
    mech: MechanicalSpec,
    *,
    saturation_threshold: float = 0.5,
) -> float:
    """Near-resonance coupling formula for the relative coordinate.

    Raises OutOfValidityError in the saturation regime, detected through the
    slope of the implicit shift equation at k0 (|h'| no longer small).
    """
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    tm = coeffs.transmissivity
    if tm <= 0.0:
        raise ConfigError("analytic coupling needs R_m < 1")
    hp = shift_equation_slope(config, m)
    if abs(hp) > saturation_threshold:
        raise OutOfValidityError(
            f"saturation regime: |h'(k0)| = {abs(hp):.3g} exceeds "
            f"{saturation_threshold}"
        )
    g_sing = single_membrane_coupling(config, m, mech)
    factor = (cos_phase(k0, 2.0 * config.com_offset_m) + math.sqrt(coeffs.reflectivity)) / tm
    return -factor * g_sing


def single_membrane_coupling(config: CavityConfig, m: int, mech: MechanicalSpec) -> float:
    """Peak coupling of one membrane alone, 2 sqrt(R_m) (omega0/L) x_zpm."""
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    omega0 = SPEED_OF_LIGHT * k0
    return 2.0 * math.sqrt(coeffs.reflectivity) * (omega0 / config.length_m) * zero_point_motion(mech)


def coupling_cap(config: CavityConfig, mech: MechanicalSpec) -> float:
    """Saturation value (omega0/q) x_zpm: the inner cavity's bare coupling."""
    if config.separation_m <= 0.0:
        raise ConfigError("membrane separation must be positive")
    m = mode_index_near(config.length_m, config.wavelength_m)
    omega0 = SPEED_OF_LIGHT * empty_mode(m, config.length_m)
    return (omega0 / config.separation_m) * zero_point_motion(mech)


def cooperativity(g: float, kappa: float, mech: MechanicalSpec) -> float:
    """Single-photon cooperativity g^2 / (kappa * gamma_m)."""
    if kappa <= 0.0:
        raise ConfigError("cavity decay rate must be positive")
    if mech.gamma_m is None:
        raise ConfigError("mechanical damping (gamma_m or quality_factor) required")
    return g * g / (kappa * mech.gamma_m)


def coupling_report(config: CavityConfig, m: int, mech: MechanicalSpec) -> CouplingReport:
    """All couplings of one configuration in one pass."""
    g_q = coupling_numeric(config, m, mech, "relative")
    g_com = coupling_numeric(config, m, mech, "com")
    try:
        g_analytic = coupling_analytic(config, m, mech)
    except OutOfValidityError:
        g_analytic = math.nan
    k0 = empty_mode(m, config.length_m)
    return CouplingReport(
        g_q=g_q,
        g_q_big=g_com,
        g1=0.5 * g_com - g_q,
        g2=0.5 * g_com + g_q,
        g_sing=single_membrane_coupling(config, m, mech),
        g_q_max=(SPEED_OF_LIGHT * k0 / config.separation_m) * zero_point_motion(mech),
        g_q_analytic=g_analytic,
        enhancement=config.length_m / (2.0 * config.separation_m),
        x_zpm=zero_point_motion(mech),
        omega0=SPEED_OF_LIGHT * k0,
    )
