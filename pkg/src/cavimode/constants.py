"""Physical constants (SI)."""

SPEED_OF_LIGHT = 299792458.0  # m/s, exact
HBAR = 1.054571817e-34  # J s
