"""Parameter-scan engine behind the command-line interface.

A scan sweeps the membrane separation (and optionally the CoM position or
the membrane reflectivity) and records resonance shifts, peak transmissions
or finesse per grid point.  Output is deterministic: rows come out in sweep
order with 17-significant-digit floats, so repeated runs are byte-identical.

Grid lines (one per reflectivity value, or one per CoM row in 2-d scans) are
independent and dispatched to a thread pool; points along the swept axis run
serially within a line so the exact solver can track its resonance branch
continuously.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import (
    ConfigError,
    DivergentCorrectionError,
    NoRootInWindowError,
    PeakOverlapError,
    SingularConfigurationError,
    StencilBranchError,
)
from .coupling import MechanicalSpec
from .membrane import MembraneSpec
from .modes import (
    exact_shift,
    first_order_shift,
    mode_index_near,
    transmission_at_resonance,
    zeroth_order_shift,
)
from .transfer import CavityConfig

SCAN_KINDS = ("shift-1d", "shift-2d", "reflectivity-sweep", "finesse-scan",
              "coupling-report")
METHODS = ("exact", "zeroth", "first")


@dataclass(frozen=True)
class ScanRequest:
    """A fully specified scan: base configuration plus sweep axes.

    The swept separation is q = base separation + a * wavelength; 2-d scans
    sweep the CoM as Q = b * wavelength.  ``rm_values`` runs the whole sweep
    once per membrane reflectivity (one line per value).
    """

    kind: str
    config: CavityConfig
    a_start: float = -0.5
    a_stop: float = 0.5
    a_points: int = 201
    b_start: float | None = None
    b_stop: float | None = None
    b_points: int | None = None
    rm_values: tuple[float, ...] | None = None
    methods: tuple[str, ...] = ("exact",)
    mode_index: int | None = None
    mech: MechanicalSpec | None = None
    finesse_override: float | None = None

    def __post_init__(self):
        if self.kind not in SCAN_KINDS:
            raise ConfigError(f"unknown scan kind {self.kind!r}")
        if self.kind != "coupling-report":
            if self.a_points < 2:
                raise ConfigError("sweep needs at least 2 points")
            for name in self.methods:
                if name not in METHODS:
                    raise ConfigError(f"unknown method {name!r}")
            if self.kind == "shift-2d" and (
                self.b_points is None or self.b_points < 2
            ):
                raise ConfigError("2-d scan needs a b axis with at least 2 points")
        self._validate_grid_corners()

    def _validate_grid_corners(self):
        """Every grid point must be a valid cavity; q and Q are linear in the
        sweep variables, so checking the corners suffices."""
        for a in (self.a_start, self.a_stop):
            for b in (self.b_start, self.b_stop):
                cfg = self.config
                q = cfg.separation_m + a * cfg.wavelength_m
                big_q = (
                    b * cfg.wavelength_m if b is not None else cfg.com_offset_m
                )
                replace(cfg, separation_m=q, com_offset_m=big_q)

    @property
    def resolved_mode_index(self) -> int:
        if self.mode_index is not None:
            return self.mode_index
        return mode_index_near(self.config.length_m, self.config.wavelength_m)


@dataclass
class ScanRecord:
    """One grid point.  ``converged`` is 0 and ``error`` carries a code when
    any requested quantity failed at this point; other fields stay NaN."""

    a: float
    q_m: float
    big_q_m: float
    rm: float
    b: float | None = None
    dk_exact: float | None = None
    dk_zeroth: float | None = None
    dk_first: float | None = None
    tc_max: float | None = None
    finesse_numeric: float | None = None
    finesse_closed: float | None = None
    finesse_empty: float | None = None
    converged: int = 1
    error: str = ""


@dataclass
class ScanResult:
    request: ScanRequest
    records: list[ScanRecord] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def warning_count(self) -> int:
        return sum(1 for r in self.records if not r.converged)


_COLUMNS = {
    "shift-1d": ("a", "q_m", "Q_m", "Rm", "dk_exact", "dk_zeroth", "dk_first",
                 "Tc_max", "converged"),
    "reflectivity-sweep": ("a", "q_m", "Q_m", "Rm", "dk_exact", "dk_zeroth",
                           "dk_first", "Tc_max", "converged"),
    "shift-2d": ("a", "b", "q_m", "Q_m", "Rm", "dk_exact", "dk_zeroth",
                 "dk_first", "Tc_max", "converged"),
    "finesse-scan": ("a", "q_m", "Q_m", "Rm", "finesse_numeric",
                     "finesse_closed", "finesse_empty", "Tc_max", "converged"),
}

_FIELD_OF_COLUMN = {
    "a": "a", "b": "b", "q_m": "q_m", "Q_m": "big_q_m", "Rm": "rm",
    "dk_exact": "dk_exact", "dk_zeroth": "dk_zeroth", "dk_first": "dk_first",
    "Tc_max": "tc_max", "finesse_numeric": "finesse_numeric",
    "finesse_closed": "finesse_closed", "finesse_empty": "finesse_empty",
    "converged": "converged",
}

_POINT_ERRORS = (
    NoRootInWindowError, SingularConfigurationError, DivergentCorrectionError,
    StencilBranchError, PeakOverlapError, ConfigError,
)

_ERROR_CODES = {
    NoRootInWindowError: "no-root",
    SingularConfigurationError: "singular",
    DivergentCorrectionError: "divergent-correction",
    StencilBranchError: "stencil-branch",
    PeakOverlapError: "peak-overlap",
    ConfigError: "config",
}


def _grid(start: float, stop: float, points: int) -> list[float]:
    if points == 1:
        return [start]
    step = (stop - start) / (points - 1)
    return [start + i * step for i in range(points)]


def _scan_line(request: ScanRequest, rm: float | None, b: float | None) -> list[ScanRecord]:
    """One serial sweep along the a axis (fixed reflectivity / CoM row)."""
    base = request.config
    if rm is not None:
        base = replace(base, membrane=MembraneSpec.synthetic(
            rm, base.membrane.phase if not base.membrane.is_physical else 0.0))
    if b is not None:
        base = replace(base, com_offset_m=b * base.wavelength_m)
    m = request.resolved_mode_index
    records = []
    prev_k: float | None = None
    for a in _grid(request.a_start, request.a_stop, request.a_points):
        q = request.config.separation_m + a * base.wavelength_m
        cfg = replace(base, separation_m=q)
        rm_actual = cfg.membrane_at(
            m * math.pi / cfg.length_m).reflectivity
        rec = ScanRecord(a=a, q_m=q, big_q_m=cfg.com_offset_m, rm=rm_actual, b=b)
        try:
            if request.kind == "finesse-scan":
                from .finesse import finesse_numeric  # deferred: avoid cycle
                rep = finesse_numeric(cfg, m, near_k=prev_k)
                prev_k = rep.k_resonance
                rec.finesse_numeric = rep.finesse_numeric
                rec.finesse_closed = rep.finesse_closed
                rec.finesse_empty = rep.finesse_empty
                rec.tc_max = rep.tc_max
            else:
                best_k = None
                if "exact" in request.methods:
                    sol = exact_shift(cfg, m, near_k=prev_k)
                    prev_k = sol.k
                    best_k = sol.k
                    rec.dk_exact = sol.delta_k
                if "zeroth" in request.methods:
                    z = zeroth_order_shift(cfg, m)
                    rec.dk_zeroth = z.delta_k
                    best_k = best_k if best_k is not None else z.k
                if "first" in request.methods:
                    f = first_order_shift(cfg, m)
                    rec.dk_first = f.delta_k
                    best_k = best_k if best_k is not None else f.k
                if best_k is not None:
                    rec.tc_max = float(transmission_at_resonance(cfg, best_k))
        except _POINT_ERRORS as err:
            rec.converged = 0
            rec.error = _ERROR_CODES.get(type(err), "error")
        records.append(rec)
    return records


def run_scan(request: ScanRequest, threads: int | None = None) -> ScanResult:
    """Execute a sweep; failed points are flagged, never dropped."""
    if request.kind == "coupling-report":
        from .report import strong_coupling_report  # deferred: avoid cycle
        summary = strong_coupling_report(request)
        return ScanResult(request=request, records=[], summary=summary)

    if request.kind == "shift-2d":
        lines: list[tuple[float | None, float | None]] = [
            (None, b) for b in _grid(request.b_start, request.b_stop,
                                     request.b_points)
        ]
    elif request.rm_values:
        lines = [(rm, None) for rm in request.rm_values]
    else:
        lines = [(None, None)]

    if threads is None or threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(
                lambda args: _scan_line(request, *args), lines))
    else:
        chunks = [_scan_line(request, rm, b) for rm, b in lines]

    records: list[ScanRecord] = []
    for chunk in chunks:
        records.extend(chunk)
    result = ScanResult(request=request, records=records)
    result.summary = _summarize(request, records)
    return result


def _extreme(values: Iterable[float | None], fn) -> float | None:
    vals = [v for v in values if v is not None and math.isfinite(v)]
    return fn(vals) if vals else None


def _summarize(request: ScanRequest, records: list[ScanRecord]) -> dict:
    summary: dict = {
        "kind": request.kind,
        "rows": len(records),
        "failed_points": sum(1 for r in records if not r.converged),
        "errors": sorted({r.error for r in records if r.error}),
        "mode_index": request.resolved_mode_index,
    }
    for method in ("exact", "zeroth", "first"):
        col = f"dk_{method}"
        peak = _extreme((getattr(r, col) for r in records),
                        lambda v: max(abs(x) for x in v))
        if peak is not None:
            summary[f"max_abs_dk_{method}"] = peak
    fin_min = _extreme((r.finesse_numeric for r in records), min)
    fin_max = _extreme((r.finesse_numeric for r in records), max)
    if fin_min is not None:
        summary["finesse_min"] = fin_min
        summary["finesse_max"] = fin_max
    tc = _extreme((r.tc_max for r in records), max)
    if tc is not None:
        summary["tc_max_peak"] = tc
    return summary


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def render_csv(result: ScanResult) -> str:
    columns = _COLUMNS[result.request.kind]
    out = [",".join(columns)]
    for rec in result.records:
        out.append(",".join(
            _fmt(getattr(rec, _FIELD_OF_COLUMN[c])) for c in columns))
    return "\n".join(out) + "\n"


def render_json(result: ScanResult) -> str:
    if result.request.kind == "coupling-report":
        payload = result.summary
    else:
        columns = _COLUMNS[result.request.kind]
        payload = {
            "columns": list(columns),
            "rows": [
                [getattr(rec, _FIELD_OF_COLUMN[c]) for c in columns]
                for rec in result.records
            ],
            "summary": result.summary,
        }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
