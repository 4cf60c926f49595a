"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid membrane, cavity or mechanical parameters."""


class SingularConfigurationError(RuntimeError):
    """Degenerate optical configuration (e.g. perfectly reflective membrane
    sitting exactly on a field antinode)."""


class NoRootInWindowError(RuntimeError):
    """The mode equation has no root inside the search window.

    Carries the scan of the residual over the window so the caller can
    inspect what happened (typically an avoided-crossing pinch).
    """

    def __init__(self, message: str, k_grid=None, residual_grid=None):
        super().__init__(message)
        self.k_grid = k_grid
        self.residual_grid = residual_grid


class DivergentCorrectionError(RuntimeError):
    """First-order frequency-shift correction diverges (h'(k0) close to 1)."""


class StencilBranchError(RuntimeError):
    """Finite-difference stencil for a coupling jumped between resonance
    branches and shrinking the step did not cure it."""


class OutOfValidityError(RuntimeError):
    """Analytic coupling formula requested outside its validity domain
    (saturation regime)."""


class PeakOverlapError(RuntimeError):
    """Transmission peak is not isolated: half maximum not reached within a
    quarter free spectral range of the peak."""
