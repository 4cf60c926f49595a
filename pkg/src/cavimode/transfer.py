"""Intracavity fields and transmission of the two-membrane cavity.

Three routes to the same physics live here and cross-check each other:

* ``solve_fields``          -- forward substitution of the eight-amplitude
                               linear system (mirror / membrane scattering
                               relations for a plane wave);
* ``transmission_closed_form`` -- the closed-form transmission with its
                               complex denominator;
* ``denominator_parts``     -- the same |denominator|^2 written as a
                               quadratic in X(kL') = sin(kL') -
                               R_m sin(kL' - 2kq').

Both mirrors are identical (amplitude r = sqrt(R), t = sqrt(1-R)) and so are
the two membranes; the membranes sit at Q -/+ q/2 around the cavity centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .membrane import MembraneCoefficients, MembraneSpec, membrane_coefficients
from .phases import phasor


@dataclass(frozen=True)
class CavityConfig:
    """Geometry and optics of the driven cavity.

    ``com_offset_m`` is the centre-of-mass coordinate Q of the membrane pair
    (measured from the cavity centre) and ``separation_m`` the membrane
    distance q, so the membranes sit at Q - q/2 and Q + q/2.
    """

    length_m: float
    mirror_reflectivity: float
    membrane: MembraneSpec
    com_offset_m: float
    separation_m: float
    wavelength_m: float

    def __post_init__(self):
        if self.length_m <= 0.0:
            raise ConfigError("cavity length must be positive")
        if not 0.0 < self.mirror_reflectivity < 1.0:
            raise ConfigError("mirror reflectivity must lie strictly in (0, 1)")
        if self.wavelength_m <= 0.0:
            raise ConfigError("wavelength must be positive")
        if self.separation_m <= 0.0:
            raise ConfigError("membrane separation q must be positive")
        if abs(self.com_offset_m) + 0.5 * self.separation_m >= 0.5 * self.length_m:
            raise ConfigError("membranes must sit strictly inside the cavity")

    @property
    def subcavity_lengths(self) -> tuple[float, float, float]:
        """(L1, L2, L3): mirror-to-membrane, membrane gap, membrane-to-mirror."""
        half = 0.5 * self.length_m
        l1 = half + self.com_offset_m - 0.5 * self.separation_m
        l3 = half - self.com_offset_m - 0.5 * self.separation_m
        return l1, self.separation_m, l3

    @property
    def k_drive(self) -> float:
        """Wavenumber of the nominal driving wavelength."""
        return 2.0 * math.pi / self.wavelength_m

    def membrane_at(self, k: float) -> MembraneCoefficients:
        return membrane_coefficients(self.membrane, k)


@dataclass(frozen=True)
class FieldSolution:
    """Field amplitudes for unit drive, in the sign/phase convention of the
    scattering relations (i*t on transmission, -r_m on membrane reflection)."""

    a_in: complex
    a1: complex
    a2: complex
    a3: complex
    a4: complex
    a5: complex
    a6: complex
    a_ref: complex
    a_tran: complex

    @property
    def reflected_power(self) -> float:
        return abs(self.a_ref) ** 2

    @property
    def transmitted_power(self) -> float:
        return abs(self.a_tran) ** 2


@dataclass(frozen=True)
class DenominatorParts:
    """Pieces of |D|^2 = A X^2 + B X + C and the direct complex D."""

    d: complex
    a: float
    b: float
    c: float
    x: float
    lprime: float
    qprime: float

    @property
    def dsq_direct(self) -> float:
        return abs(self.d) ** 2

    @property
    def dsq_quadratic(self) -> float:
        return (self.a * self.x + self.b) * self.x + self.c


def _primitive_phasors(config: CavityConfig, k: float, phi: float):
    """Unit phasors e^{ikL1}, e^{ikL2}, e^{ikL3}, e^{i phi}.

    Shared by the field solver and the closed form so that the two routes
    agree to rounding even at deep resonances where D nearly cancels.
    """
    l1, l2, l3 = config.subcavity_lengths
    e1 = phasor(k, l1)
    e2 = phasor(k, l2)
    e3 = phasor(k, l3)
    ephi = complex(math.cos(phi), math.sin(phi))
    return e1, e2, e3, ephi


def solve_fields(config: CavityConfig, k: float) -> FieldSolution:
    """Solve the amplitude relations for unit input.

    The system is triangular once the two outermost relations are folded in,
    so it is solved exactly by substitution; no matrix solver is involved.
    """
    if k <= 0.0:
        raise ConfigError("wavenumber must be positive")
    coeffs = config.membrane_at(k)
    rm, tm = coeffs.r, coeffs.t
    r = math.sqrt(config.mirror_reflectivity)
    t = math.sqrt(1.0 - config.mirror_reflectivity)
    e1, e2, e3, _ = _primitive_phasors(config, k, coeffs.phi)

    # a5 = g5*a3, a4 = g4*a3, a3 = g3*a1, a2 = g2*a1
    g5 = 1j * tm * e2 / (1.0 + r * rm * e3 * e3)
    g4 = 1j * tm * r * e3 * e3 * g5 - rm * e2
    g3 = 1j * tm * e1 / (1.0 + rm * e2 * g4)
    g2 = 1j * tm * e2 * g4 * g3 - rm * e1

    a1 = 1j * t / (1.0 - r * e1 * g2)
    a2 = g2 * a1
    a3 = g3 * a1
    a4 = g4 * a3
    a5 = g5 * a3
    a6 = r * a5 * e3
    a_ref = 1j * t * a2 * e1 + r
    a_tran = 1j * t * a5 * e3
    return FieldSolution(
        a_in=1.0 + 0.0j, a1=a1, a2=a2, a3=a3, a4=a4, a5=a5, a6=a6,
        a_ref=a_ref, a_tran=a_tran,
    )


def _denominator(config: CavityConfig, k: float, coeffs: MembraneCoefficients) -> complex:
    """Complex transmission denominator, built from the shared phasors."""
    big_r = config.mirror_reflectivity
    big_rm = coeffs.reflectivity
    e1, e2, e3, ephi = _primitive_phasors(config, k, coeffs.phi)
    e1sq, e2sq, e3sq = e1 * e1, e2 * e2, e3 * e3
    ephi2 = ephi * ephi
    root = math.sqrt(big_r * big_rm)
    return (
        1.0
        - big_rm * e2sq * ephi2
        + big_r * big_rm * e1sq * e3sq * ephi2
        - big_r * e1sq * e2sq * e3sq * ephi2 * ephi2
        + root * (
            e1sq * ephi
            + e3sq * ephi
            - e1sq * e2sq * ephi2 * ephi
            - e2sq * e3sq * ephi2 * ephi
        )
    )


def transmission_closed_form(config: CavityConfig, k: float) -> float:
    """Intensity transmission of the whole cavity at wavenumber ``k``."""
    if k <= 0.0:
        raise ConfigError("wavenumber must be positive")
    coeffs = config.membrane_at(k)
    d = _denominator(config, k, coeffs)
    num = (1.0 - config.mirror_reflectivity) ** 2 * coeffs.transmissivity ** 2
    return num / abs(d) ** 2


def denominator_parts(config: CavityConfig, k: float) -> DenominatorParts:
    """|D|^2 split as A X^2 + B X + C.

    X = sin(kL') - R_m sin(kL' - 2kq') with the effective lengths
    L' = L + 2 phi / k and q' = q + phi / k, so kL' = kL + 2 phi and
    kL' - 2kq' = k (L - 2q) exactly; the membrane phase cancels from the
    second argument.  All trig factors are read off the same unit phasors
    as the direct denominator (e.g. sin(kq') = Im(e2 e^{i phi}),
    cos(2kQ) = Re(e1 conj(e3)) since L1 - L3 = 2Q), so the quadratic and
    the direct |D|^2 agree to rounding even where D nearly cancels.
    """
    if k <= 0.0:
        raise ConfigError("wavenumber must be positive")
    coeffs = config.membrane_at(k)
    big_r = config.mirror_reflectivity
    big_rm = coeffs.reflectivity
    phi = coeffs.phi
    length = config.length_m
    q = config.separation_m

    e1, e2, e3, ephi = _primitive_phasors(config, k, phi)
    e_lprime = e1 * e2 * e3 * ephi * ephi          # exp(i kL')
    e_qprime = e2 * ephi                           # exp(i kq')
    e_2q = e1 * e3.conjugate()                     # exp(i 2kQ)
    x = e_lprime.imag - big_rm * (e1 * e3 * e2.conjugate()).imag
    sin_kq = e_qprime.imag
    a = 4.0 * big_r
    b = (
        8.0 * math.sqrt(big_r * big_rm) * (1.0 + big_r)
        * e_2q.real * sin_kq
    )
    c = (
        8.0 * big_r * big_rm * (e_2q * e_2q).real * sin_kq * sin_kq
        - 2.0 * big_r * (1.0 - big_rm) ** 2
        + (1.0 + big_r * big_r)
        * (1.0 - 2.0 * big_rm * (e_qprime * e_qprime).real + big_rm * big_rm)
    )
    return DenominatorParts(
        d=_denominator(config, k, coeffs),
        a=a, b=b, c=c, x=x,
        lprime=length + 2.0 * phi / k,
        qprime=q + phi / k,
    )
