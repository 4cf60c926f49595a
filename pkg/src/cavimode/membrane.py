"""Reflection and transmission of a single lossless dielectric membrane.

A membrane is described either by its physical parameters (refractive index
and thickness, from which the slab coefficients follow) or synthetically by
a target intensity reflectivity and a phase.  The synthetic mode exists
because patterned membranes reach reflectivities far beyond what a plain
dielectric slab of realistic index can provide, so the reflectivity is often
the natural free knob.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class MembraneSpec:
    """One of two parameterizations of a lossless membrane.

    Physical: ``index`` (n >= 1) and ``thickness_m`` (> 0).
    Synthetic: ``reflectivity`` (0 <= R_m < 1) and ``phase`` (radians,
    in (-pi, pi]).
    """

    index: float | None = None
    thickness_m: float | None = None
    reflectivity: float | None = None
    phase: float = 0.0

    def __post_init__(self):
        physical = self.index is not None or self.thickness_m is not None
        synthetic = self.reflectivity is not None
        if physical == synthetic:
            raise ConfigError(
                "specify either (index, thickness_m) or (reflectivity, phase)"
            )
        if physical:
            if self.index is None or self.thickness_m is None:
                raise ConfigError("physical membrane needs index and thickness_m")
            if self.index < 1.0:
                raise ConfigError(f"refractive index must be >= 1, got {self.index}")
            if self.thickness_m <= 0.0:
                raise ConfigError("membrane thickness must be positive")
        else:
            if not 0.0 <= self.reflectivity < 1.0:
                raise ConfigError(
                    f"membrane reflectivity must be in [0, 1), got {self.reflectivity}"
                )
            if not -math.pi < self.phase <= math.pi:
                raise ConfigError("membrane phase must lie in (-pi, pi]")

    @property
    def is_physical(self) -> bool:
        return self.index is not None

    @classmethod
    def physical(cls, index: float, thickness_m: float) -> "MembraneSpec":
        return cls(index=index, thickness_m=thickness_m)

    @classmethod
    def synthetic(cls, reflectivity: float, phase: float = 0.0) -> "MembraneSpec":
        return cls(reflectivity=reflectivity, phase=phase)


@dataclass(frozen=True)
class MembraneCoefficients:
    """Amplitude coefficients of one membrane at a given wavenumber.

    ``r`` and ``t`` share a common argument ``phi`` modulo pi (losslessness);
    ``phi`` is taken from the transmission amplitude, which never vanishes,
    so it is continuous across membrane resonances where ``r`` goes through
    zero.
    """

    r: complex
    t: complex
    reflectivity: float
    transmissivity: float
    phi: float


def membrane_coefficients(spec: MembraneSpec, k: float) -> MembraneCoefficients:
    """Amplitude reflection/transmission of the membrane at wavenumber ``k``.

    For a physical slab of index n and thickness d the coefficients are

        r = (n^2 - 1) sin(b) / [(n^2 + 1) sin(b) + 2 i n cos(b)],
        t = 2 n / [(n^2 + 1) sin(b) + 2 i n cos(b)],        b = n k d,

    which satisfy |r|^2 + |t|^2 = 1 for real n.  For a synthetic membrane
    r = sqrt(R_m) e^{i phi}, t = sqrt(1 - R_m) e^{i phi}.
    """
    if k <= 0.0:
        raise ConfigError("wavenumber must be positive")
    if spec.is_physical:
        n = spec.index
        beta = n * k * spec.thickness_m
        den = (n * n + 1.0) * math.sin(beta) + 2j * n * math.cos(beta)
        r = (n * n - 1.0) * math.sin(beta) / den
        t = 2.0 * n / den
    else:
        ph = cmath.exp(1j * spec.phase)
        r = math.sqrt(spec.reflectivity) * ph
        t = math.sqrt(1.0 - spec.reflectivity) * ph
    big_r = abs(r) ** 2
    return MembraneCoefficients(
        r=r, t=t, reflectivity=big_r, transmissivity=1.0 - big_r,
        phi=cmath.phase(t),
    )


def membrane_phase(coeffs: MembraneCoefficients) -> float:
    """Common phase of the membrane coefficients (argument of t)."""
    return coeffs.phi
