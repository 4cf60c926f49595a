"""Two-membrane Fabry-Perot cavity: resonances, couplings, finesse."""

from .constants import HBAR, SPEED_OF_LIGHT
from .coupling import (
    CouplingReport,
    MechanicalSpec,
    cooperativity,
    coupling_analytic,
    coupling_cap,
    coupling_numeric,
    coupling_report,
    single_membrane_coupling,
    zero_point_motion,
)
from .errors import (
    ConfigError,
    DivergentCorrectionError,
    NoRootInWindowError,
    OutOfValidityError,
    PeakOverlapError,
    SingularConfigurationError,
    StencilBranchError,
)
from .finesse import (
    FinesseReport,
    StrongCouplingFigures,
    empty_cavity_finesse,
    finesse_closed_form,
    finesse_numeric,
    g_over_kappa,
    kappa_from_finesse,
)
from .membrane import (
    MembraneCoefficients,
    MembraneSpec,
    membrane_coefficients,
    membrane_phase,
)
from .modes import (
    ModeSolution,
    ShiftFunctionParts,
    empty_mode,
    exact_shift,
    first_order_shift,
    mode_equation_residual,
    mode_index_near,
    shift_equation_slope,
    shift_parts,
    transmission_at_resonance,
    zeroth_order_shift,
)
from .presets import PRESET_NAMES, parse_request, preset, render_request
from .report import resonant_separation, strong_coupling_report
from .scan import ScanRecord, ScanRequest, ScanResult, render_csv, render_json, run_scan
from .transfer import (
    CavityConfig,
    DenominatorParts,
    FieldSolution,
    denominator_parts,
    solve_fields,
    transmission_closed_form,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
