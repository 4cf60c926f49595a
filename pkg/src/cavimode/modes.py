"""Cavity mode resonances of the two-membrane cavity.

The resonance condition for mirror reflectivity R is

    sin(kL') - R_m sin(kL' - 2kq')
        + (1+R)/sqrt(R) * sqrt(R_m) cos(2kQ) sin(kq') = 0,

with effective lengths L' = L + 2*phi/k and q' = q + phi/k.  Grouping the
fast kL' terms it becomes  sin(kL' + theta) = boost * Ftilde  with
theta in (-pi/2, pi/2) and |Ftilde| <= 1, which is what the solver brackets.

Besides the exact numerical root this module provides the two analytic
approximations of the shift delta_k = k - m*pi/L obtained from the implicit
form delta_k = h(k0 + delta_k):

    zeroth order:  h(k0)
    first order:   h(k0) / (1 - h'(k0))

with h' by central finite difference.  Membrane coefficients (R_m, phi) are
evaluated once at k0 = m*pi/L and held fixed across the window; for thin
membranes they vary negligibly over one free spectral range, and for
synthetic membranes they are constants anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    ConfigError,
    DivergentCorrectionError,
    NoRootInWindowError,
    SingularConfigurationError,
)
from .membrane import MembraneCoefficients
from .phases import cos_phase, sin_phase, wrap_phase
from .transfer import CavityConfig

_LD = np.longdouble
_PI_LD = _LD("3.141592653589793238462643383279502884")


@dataclass(frozen=True)
class ModeSolution:
    """A located resonance of longitudinal index ``m``.

    ``on_mode_equation`` is False only for the rare fallback where the mode
    equation has no root in the window (avoided-crossing pinch at extreme
    membrane reflectivity) and the transmission extremum is returned instead;
    ``residual`` is the value of the mode equation at ``k`` either way.
    """

    m: int
    k0: float
    delta_k: float
    k: float
    method: str  # "exact" | "zeroth" | "first"
    converged: bool
    residual: float | None = None
    on_mode_equation: bool = True


@dataclass(frozen=True)
class ShiftFunctionParts:
    """Trigonometric building blocks of the resonance condition at one k."""

    atrig: float   # 1 - R_m cos(2kq'),  > 0 for R_m < 1
    btrig: float   # R_m sin(2kq')
    fval: float    # -2 sqrt(R_m) cos(2kQ) sin(kq')
    norm: float    # sqrt(atrig^2 + btrig^2)
    ftilde: float  # fval / norm, clipped into [-1, 1]
    theta: float   # atan2(btrig, atrig), in (-pi/2, pi/2)


def empty_mode(m: int, length_m: float) -> float:
    """Empty-cavity mode wavenumber m*pi/L."""
    if m < 1:
        raise ConfigError("mode index must be a positive integer")
    if length_m <= 0.0:
        raise ConfigError("cavity length must be positive")
    return m * math.pi / length_m


def mode_index_near(length_m: float, wavelength_m: float) -> int:
    """Longitudinal index of the empty-cavity mode nearest 2*pi/wavelength."""
    return round(2.0 * length_m / wavelength_m)


def shift_parts(
    config: CavityConfig,
    k,
    *,
    qprime: float | None = None,
    coeffs: MembraneCoefficients | None = None,
) -> ShiftFunctionParts:
    """Building blocks of the resonance condition at wavenumber ``k``.

    By default the effective distance enters exactly (kq' = kq + phi); the
    analytic shift expansion instead freezes q' at the empty-cavity k0 and
    passes it via ``qprime``.  Accepts an array ``k`` for vectorized use, in
    which case the fields are arrays.
    """
    if coeffs is None:
        coeffs = config.membrane_at(k if np.ndim(k) == 0 else float(np.mean(k)))
    rm = coeffs.reflectivity
    phi = coeffs.phi
    if qprime is None:
        two_kq = wrap_phase(k, 2.0 * config.separation_m, 2.0 * phi)
        sin_kq = sin_phase(k, config.separation_m, phi)
    else:
        two_kq = wrap_phase(k, 2.0 * qprime)
        sin_kq = sin_phase(k, qprime)
    atrig = 1.0 - rm * np.cos(two_kq)
    btrig = rm * np.sin(two_kq)
    fval = -2.0 * math.sqrt(rm) * cos_phase(k, 2.0 * config.com_offset_m) * sin_kq
    norm = np.hypot(atrig, btrig)
    if np.any(norm == 0.0):
        raise SingularConfigurationError(
            "resonance condition degenerates at R_m = 1 with cos(2kq') = 1"
        )
    ftilde = np.clip(fval / norm, -1.0, 1.0)
    theta = np.arctan2(btrig, atrig)
    if np.ndim(k) == 0:
        return ShiftFunctionParts(
            float(atrig), float(btrig), float(fval),
            float(norm), float(ftilde), float(theta),
        )
    return ShiftFunctionParts(atrig, btrig, fval, norm, ftilde, theta)


def _mirror_boost(mirror_reflectivity: float) -> float:
    """(1+R)/(2 sqrt(R)); tends to 1 as R -> 1."""
    return (1.0 + mirror_reflectivity) / (2.0 * math.sqrt(mirror_reflectivity))


def mode_equation_residual(
    config: CavityConfig,
    k,
    *,
    form: str = "normalized",
    mirror_boost: float | None = None,
    coeffs: MembraneCoefficients | None = None,
):
    """Residual of the resonance condition at ``k`` (array-friendly).

    ``form="normalized"``: sin(kL' + theta) - boost * Ftilde, an O(1)
    quantity suited to bracketing.  ``form="direct"``: the unnormalized
    condition sin(kL') - R_m sin(kL'-2kq') + 2*boost*sqrt(R_m) cos(2kQ)
    sin(kq').  ``mirror_boost=1`` recovers the perfect-mirror equation.
    """
    if coeffs is None:
        coeffs = config.membrane_at(k if np.ndim(k) == 0 else float(np.mean(k)))
    if mirror_boost is None:
        mirror_boost = _mirror_boost(config.mirror_reflectivity)
    parts = shift_parts(config, k, coeffs=coeffs)
    if form == "normalized":
        arg = wrap_phase(k, config.length_m, 2.0 * coeffs.phi) + parts.theta
        return np.sin(arg) - mirror_boost * parts.ftilde
    if form == "direct":
        x = (
            sin_phase(k, config.length_m, 2.0 * coeffs.phi)
            - coeffs.reflectivity * sin_phase(k, config.length_m - 2.0 * config.separation_m)
        )
        # -boost * fval == (1+R)/sqrt(R) * sqrt(R_m) cos(2kQ) sin(kq')
        return x - mirror_boost * parts.fval
    raise ValueError(f"unknown residual form {form!r}")


def transmission_at_resonance(config: CavityConfig, k: float) -> float:
    """Peak transmission at a solved resonance wavenumber.

    Equals (1-R_m)^2 / [(1-R_m)^2 + 4 R_m sin^2(2kQ) sin^2(kq')]; exact for
    a root of the resonance condition, independent of mirror reflectivity.
    """
    coeffs = config.membrane_at(k)
    tm = coeffs.transmissivity
    s2q = sin_phase(k, 2.0 * config.com_offset_m)
    skq = sin_phase(k, config.separation_m, coeffs.phi)
    return tm * tm / (tm * tm + 4.0 * coeffs.reflectivity * s2q * s2q * skq * skq)


def _h(config: CavityConfig, m: int, coeffs: MembraneCoefficients,
       qprime: float, k) -> float:
    """Right-hand side of the implicit shift equation delta_k = h(k)."""
    parts = shift_parts(config, k, qprime=qprime, coeffs=coeffs)
    sign = -1.0 if m % 2 else 1.0
    return (
        sign * np.arcsin(parts.ftilde) - parts.theta - 2.0 * coeffs.phi
    ) / config.length_m


def zeroth_order_shift(config: CavityConfig, m: int) -> ModeSolution:
    """Zeroth-order analytic shift h(k0)."""
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    qprime = config.separation_m + coeffs.phi / k0
    delta = float(_h(config, m, coeffs, qprime, k0))
    return ModeSolution(m=m, k0=k0, delta_k=delta, k=k0 + delta,
                        method="zeroth", converged=True)


def shift_equation_slope(config: CavityConfig, m: int) -> float:
    """h'(k0): slope of the implicit shift equation, by central difference.

    Gauges how nonlinear the implicit equation is at k0; magnitudes
    approaching 1 mark the saturation regime where the analytic shift
    expansion degrades.
    """
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    qprime = config.separation_m + coeffs.phi / k0
    dk = 1e-6 * math.pi / config.length_m
    return float(
        _h(config, m, coeffs, qprime, k0 + dk)
        - _h(config, m, coeffs, qprime, k0 - dk)
    ) / (2.0 * dk)


def first_order_shift(
    config: CavityConfig, m: int, *, divergence_tol: float = 1e-3
) -> ModeSolution:
    """First-order analytic shift h(k0) / (1 - h'(k0)).

    Raises DivergentCorrectionError when 1 - h'(k0) is smaller than
    ``divergence_tol`` in magnitude instead of returning a meaningless value.
    """
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    qprime = config.separation_m + coeffs.phi / k0
    h0 = float(_h(config, m, coeffs, qprime, k0))
    hp = shift_equation_slope(config, m)
    denom = 1.0 - hp
    if abs(denom) < divergence_tol:
        raise DivergentCorrectionError(
            f"first-order correction diverges: h'(k0) = {hp:.6g}"
        )
    delta = h0 / denom
    return ModeSolution(m=m, k0=k0, delta_k=delta, k=k0 + delta,
                        method="first", converged=True)


def _dsq_values(config: CavityConfig, coeffs: MembraneCoefficients, k):
    """|denominator|^2 via the quadratic decomposition, vectorized in k."""
    big_r = config.mirror_reflectivity
    rm = coeffs.reflectivity
    phi = coeffs.phi
    length = config.length_m
    q = config.separation_m
    big_q = config.com_offset_m
    x = sin_phase(k, length, 2.0 * phi) - rm * sin_phase(k, length - 2.0 * q)
    skq = sin_phase(k, q, phi)
    a = 4.0 * big_r
    b = 8.0 * math.sqrt(big_r * rm) * (1.0 + big_r) * cos_phase(k, 2.0 * big_q) * skq
    c = (
        8.0 * big_r * rm * cos_phase(k, 4.0 * big_q) * skq * skq
        - 2.0 * big_r * (1.0 - rm) ** 2
        + (1.0 + big_r * big_r) * (1.0 - 2.0 * rm * cos_phase(k, 2.0 * q, 2.0 * phi) + rm * rm)
    )
    return (a * x + b) * x + c


def _branch_offset(config: CavityConfig, coeffs: MembraneCoefficients,
                   m: int, k: float) -> float:
    """(kL' + theta)/pi - m; the mode-m root satisfies |offset| <= 1/2."""
    parts = shift_parts(config, k, coeffs=coeffs)
    total = (
        _LD(k) * _LD(config.length_m)
        + _LD(2.0 * coeffs.phi) + _LD(parts.theta)
    ) / _PI_LD
    return float(total - _LD(m))


def _sign_change_brackets(ks: np.ndarray, gs: np.ndarray) -> list[tuple[float, float]]:
    out = []
    sign = np.signbit(gs)
    flips = np.nonzero(sign[1:] != sign[:-1])[0]
    for i in flips:
        out.append((float(ks[i]), float(ks[i + 1])))
    return out


def exact_shift(
    config: CavityConfig,
    m: int,
    *,
    near_k: float | None = None,
    window_margin: float = 0.05,
    grid_points: int = 4097,
) -> ModeSolution:
    """Numerically exact resonance of mode ``m``.

    Brackets sign changes of the normalized resonance condition on a grid
    spanning one free spectral range around k0 (plus margin), refines each
    with Brent's method and a Newton polish, and keeps the root whose total
    phase classifies it as belonging to branch ``m`` (nearest ``near_k``, or
    k0, if several qualify).  Sub-grid features near an inner-cavity
    resonance are caught by local refinement around the first-order
    prediction and around the minimum of the coarse residual.

    If the condition has no root in the window (possible in a thin sliver
    near an avoided crossing when the membrane transmission is below ~1e-4,
    where |Ftilde| exceeds the mirror-boost ceiling), the transmission
    extremum (argmin of |denominator|^2) is returned with
    ``on_mode_equation=False``.
    """
    k0 = empty_mode(m, config.length_m)
    coeffs = config.membrane_at(k0)
    boost = _mirror_boost(config.mirror_reflectivity)
    lprime = config.length_m + 2.0 * coeffs.phi / k0
    # The branch-m root satisfies k L' + theta in [m pi - pi/2, m pi + pi/2],
    # i.e. delta_k * L in [-pi - 2 phi, pi - 2 phi]; cover that whole range.
    half = (math.pi * (1.0 + window_margin) + 2.0 * abs(coeffs.phi)) / lprime
    lo, hi = k0 - half, k0 + half
    grid_points = max(grid_points, 2048 * int(math.ceil(half * lprime / math.pi)) + 1)
    target = near_k if near_k is not None else k0

    def g(k):
        return mode_equation_residual(
            config, k, form="normalized", mirror_boost=boost, coeffs=coeffs
        )

    ks = np.linspace(lo, hi, grid_points)
    gs = g(ks)
    brackets = _sign_change_brackets(ks, gs)

    # Local refinement: catch roots hiding between coarse samples.
    spacing = (hi - lo) / (grid_points - 1)
    centers = [float(ks[int(np.argmin(np.abs(gs)))]), target]
    try:
        centers.append(first_order_shift(config, m).k)
    except (DivergentCorrectionError, SingularConfigurationError):
        pass
    for center in centers:
        ll = max(lo, center - 2.0 * spacing)
        rr = min(hi, center + 2.0 * spacing)
        if rr <= ll:
            continue
        fine = np.linspace(ll, rr, 2049)
        brackets.extend(_sign_change_brackets(fine, g(fine)))

    roots: list[float] = []
    for a, b in brackets:
        if any(a <= r <= b for r in roots):
            continue
        try:
            root = float(brentq(g, a, b, xtol=1e-12 * k0, rtol=8.9e-16))
        except ValueError:
            continue
        root = _newton_polish(g, root, lo, hi)
        roots.append(root)

    qualifying = [
        r for r in roots if abs(_branch_offset(config, coeffs, m, r)) <= 0.51
    ]
    if qualifying:
        k_root = min(qualifying, key=lambda r: abs(r - target))
        residual = float(
            mode_equation_residual(config, k_root, form="direct",
                                   mirror_boost=boost, coeffs=coeffs)
        )
        return ModeSolution(m=m, k0=k0, delta_k=k_root - k0, k=k_root,
                            method="exact", converged=True, residual=residual)

    k_peak = _transmission_extremum(config, coeffs, m, lo, hi, target)
    if k_peak is None:
        raise NoRootInWindowError(
            f"no resonance of mode {m} found in [{lo:.6e}, {hi:.6e}]",
            k_grid=ks, residual_grid=gs,
        )
    residual = float(
        mode_equation_residual(config, k_peak, form="direct",
                               mirror_boost=boost, coeffs=coeffs)
    )
    return ModeSolution(m=m, k0=k0, delta_k=k_peak - k0, k=k_peak,
                        method="exact", converged=True, residual=residual,
                        on_mode_equation=False)


def _newton_polish(g, k: float, lo: float, hi: float, steps: int = 2) -> float:
    """A couple of safeguarded Newton steps to push the residual to rounding."""
    h = 1e-7
    for _ in range(steps):
        g0 = float(g(k))
        if g0 == 0.0:
            break
        deriv = float(g(k + h) - g(k - h)) / (2.0 * h)
        if deriv == 0.0:
            break
        k_next = k - g0 / deriv
        if not lo <= k_next <= hi or abs(float(g(k_next))) >= abs(g0):
            break
        k = k_next
    return k


def _transmission_extremum(
    config: CavityConfig,
    coeffs: MembraneCoefficients,
    m: int,
    lo: float,
    hi: float,
    target: float,
    dense_points: int = 1 << 16,
):
    """argmin of |denominator|^2 (fallback resonance).

    Prefers minima whose total phase classifies them on (or at the edge of)
    branch ``m``; ties broken by distance to ``target``.
    """
    ks = np.linspace(lo, hi, dense_points)
    vals = _dsq_values(config, coeffs, ks)
    interior = (vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])
    idx = np.nonzero(interior)[0] + 1
    if idx.size == 0:
        return None
    floor = float(vals[idx].min())
    idx = idx[vals[idx] <= max(10.0 * floor, floor + 1e-300)]
    candidates = []
    for i in idx:
        res = minimize_scalar(
            lambda k: float(_dsq_values(config, coeffs, k)),
            bounds=(float(ks[i - 1]), float(ks[i + 1])),
            method="bounded",
            options={"xatol": 1e-13 * target},
        )
        cand = float(res.x)
        off = abs(_branch_offset(config, coeffs, m, cand))
        candidates.append((off > 0.55, abs(cand - target), cand))
    if not candidates:
        return None
    return min(candidates)[2]
