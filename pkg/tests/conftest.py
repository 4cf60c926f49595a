import math

import pytest

from cavimode import CavityConfig, MembraneSpec, mode_index_near

WAVELENGTH = 1064e-9
LENGTH = 0.01
MIRROR_R = 0.9999


@pytest.fixture
def standard_mode():
    return mode_index_near(LENGTH, WAVELENGTH)


def make_config(rm=0.8, phi=0.0, com=0.0, q=10.5 * WAVELENGTH,
                mirror=MIRROR_R, length=LENGTH, wavelength=WAVELENGTH):
    return CavityConfig(
        length_m=length,
        mirror_reflectivity=mirror,
        membrane=MembraneSpec.synthetic(rm, phi),
        com_offset_m=com,
        separation_m=q,
        wavelength_m=wavelength,
    )


def inner_resonance_separation(m, length=LENGTH, half_waves=21, phi=0.0):
    """Separation putting the inner cavity exactly on resonance for mode m
    (half_waves must match the parity of m)."""
    k0 = m * math.pi / length
    return (half_waves * math.pi - phi) / k0
