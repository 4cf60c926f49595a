"""Accurate optical phase arithmetic.

Round-trip phases in a centimetre-scale cavity are of order k*L ~ 1e5 rad.
Forming such a product naively in double precision costs ~1e-11 rad of
argument error, which would dominate every transmission identity at the
1e-9..1e-10 level.  ``wrap_phase`` therefore computes k*length exactly as a
double-double pair (Veltkamp/Dekker two-product) and reduces it with a
two-word Cody-Waite representation of 2*pi, leaving ~1e-15 rad of error.

Helpers are polymorphic in ``k`` (scalar or ndarray).
"""

from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1
_TWO_PI_HI = 6.283185307179586
_TWO_PI_LO = 2.4492935982947064e-16  # 2*pi - _TWO_PI_HI


def _two_product(a, b):
    """Exact product a*b = p + e with p = fl(a*b)."""
    p = a * b
    ah = _SPLITTER * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLITTER * b
    bh = bh - (bh - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def wrap_phase(k, length: float, extra: float = 0.0):
    """(k*length + extra) reduced to [0, 2*pi) with ~1e-15 rad accuracy.

    ``extra`` is an O(1) additive phase (membrane phase terms).
    """
    karr = np.asarray(k, dtype=np.float64)
    p, e = _two_product(karr, float(length))
    n = np.round(p / _TWO_PI_HI)
    ph, pe = _two_product(n, _TWO_PI_HI)
    r = ((p - ph) - pe) - n * _TWO_PI_LO + e + extra
    wrapped = np.mod(r, 2.0 * np.pi)
    if np.ndim(k) == 0:
        return float(wrapped)
    return wrapped


def sin_phase(k, length: float, extra: float = 0.0):
    return np.sin(wrap_phase(k, length, extra))


def cos_phase(k, length: float, extra: float = 0.0):
    return np.cos(wrap_phase(k, length, extra))


def phasor(k: float, length: float, extra: float = 0.0) -> complex:
    """exp(i*(k*length + extra)) with the argument reduced accurately."""
    ph = wrap_phase(k, length, extra)
    return complex(math.cos(ph), math.sin(ph))
