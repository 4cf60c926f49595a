"""Built-in scan recipes and the flat key=value request file format.

The figure presets use the common parameter set L = 1 cm, lambda = 1064 nm,
R = 0.9999; shifts are swept through an inner-cavity resonance via
q = q0 + a*lambda.  Requests serialize to a flat text format with units in
the key names; ``parse_request`` inverts ``render_request`` losslessly
(floats are written with repr).
"""

from __future__ import annotations

import math

from .coupling import MechanicalSpec
from .errors import ConfigError
from .membrane import MembraneSpec
from .modes import empty_mode, mode_index_near
from .scan import METHODS, ScanRequest
from .transfer import CavityConfig

_L = 0.01
_LAMBDA = 1064e-9
_R = 0.9999

PRESET_NAMES = (
    "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4",
    "strong-coupling-report",
)


def _mirror_for_finesse(finesse: float) -> float:
    """Mirror reflectivity whose empty-cavity finesse is ``finesse``."""
    x = (-math.pi + math.sqrt(math.pi * math.pi + 4.0 * finesse * finesse)) / (
        2.0 * finesse
    )
    return x * x


def _base_config(rm: float, phi: float = 0.0, com: float = 0.0,
                 q: float = 10.5 * _LAMBDA, mirror: float = _R) -> CavityConfig:
    return CavityConfig(
        length_m=_L,
        mirror_reflectivity=mirror,
        membrane=MembraneSpec.synthetic(rm, phi),
        com_offset_m=com,
        separation_m=q,
        wavelength_m=_LAMBDA,
    )


def _fig3_config(rm: float) -> CavityConfig:
    phi = math.pi / 6.0
    k0 = empty_mode(mode_index_near(_L, _LAMBDA), _L)
    return _base_config(rm, phi=phi, com=100.0 * _LAMBDA,
                        q=200.0 * _LAMBDA - phi / k0)


def preset(name: str) -> ScanRequest:
    """A fully populated request for one of the built-in recipes."""
    if name == "fig2a":
        return ScanRequest(
            kind="shift-2d", config=_base_config(0.8),
            a_start=-0.5, a_stop=0.5, a_points=101,
            b_start=0.0, b_stop=1.0, b_points=101,
            methods=("zeroth",),
        )
    if name == "fig2b":
        return ScanRequest(
            kind="shift-1d", config=_base_config(0.8),
            a_points=201, rm_values=(0.5, 0.8, 0.95),
            methods=("exact", "zeroth"),
        )
    if name == "fig2c":
        return ScanRequest(
            kind="reflectivity-sweep", config=_base_config(0.998),
            a_points=201,
            rm_values=tuple(1.0 - tm for tm in (2e-3, 1e-3, 1e-4, 1e-5, 1e-6)),
            methods=("exact",),
        )
    if name in ("fig3a", "fig3b", "fig3c"):
        rm = {"fig3a": 0.2, "fig3b": 0.8, "fig3c": 0.99}[name]
        return ScanRequest(
            kind="shift-1d", config=_fig3_config(rm), a_points=201,
            methods=("exact", "zeroth", "first"),
        )
    if name == "fig4":
        # Even point count: the exact inner-resonance point is a
        # measure-zero linewidth-narrowing sliver (width ~ lambda*T_m/2pi)
        # that the reference finesse curves do not resolve.
        return ScanRequest(
            kind="finesse-scan", config=_base_config(0.999),
            a_points=100, methods=("exact",),
        )
    if name == "strong-coupling-report":
        return ScanRequest(
            kind="coupling-report",
            config=_base_config(0.998, q=10e-6,
                                mirror=_mirror_for_finesse(6e4)),
            mech=MechanicalSpec(mass_kg=2e-12, omega_m=9.4e5,
                                quality_factor=1e6),
            finesse_override=6e4,
        )
    raise ConfigError(f"unknown preset {name!r}")


def render_request(request: ScanRequest) -> str:
    """Serialize a request to the flat key=value format."""
    cfg = request.config
    lines = [
        f"kind = {request.kind}",
        f"cavity_length_m = {cfg.length_m!r}",
        f"mirror_reflectivity = {cfg.mirror_reflectivity!r}",
        f"wavelength_m = {cfg.wavelength_m!r}",
        f"com_offset_m = {cfg.com_offset_m!r}",
        f"separation_m = {cfg.separation_m!r}",
    ]
    if cfg.membrane.is_physical:
        lines.append(f"membrane_index = {cfg.membrane.index!r}")
        lines.append(f"membrane_thickness_m = {cfg.membrane.thickness_m!r}")
    else:
        lines.append(f"membrane_reflectivity = {cfg.membrane.reflectivity!r}")
        lines.append(f"membrane_phase_rad = {cfg.membrane.phase!r}")
    if request.kind != "coupling-report":
        lines.append(f"a_start = {request.a_start!r}")
        lines.append(f"a_stop = {request.a_stop!r}")
        lines.append(f"a_points = {request.a_points}")
        lines.append("methods = " + ",".join(request.methods))
    if request.kind == "shift-2d":
        lines.append(f"b_start = {request.b_start!r}")
        lines.append(f"b_stop = {request.b_stop!r}")
        lines.append(f"b_points = {request.b_points}")
    if request.rm_values:
        lines.append("rm_values = " + ",".join(repr(v) for v in request.rm_values))
    if request.mode_index is not None:
        lines.append(f"mode_index = {request.mode_index}")
    if request.mech is not None:
        lines.append(f"mass_kg = {request.mech.mass_kg!r}")
        lines.append(f"omega_m_rad_s = {request.mech.omega_m!r}")
        if request.mech.quality_factor is not None:
            lines.append(f"quality_factor = {request.mech.quality_factor!r}")
        elif request.mech.gamma_m is not None:
            lines.append(f"gamma_m_rad_s = {request.mech.gamma_m!r}")
    if request.finesse_override is not None:
        lines.append(f"finesse = {request.finesse_override!r}")
    return "\n".join(lines) + "\n"


def parse_request(text: str, overrides: dict | None = None) -> ScanRequest:
    """Parse the flat key=value format (later keys win; '#' comments)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return _request_from_values(values)


_KNOWN_KEYS = {
    "kind", "cavity_length_m", "mirror_reflectivity", "wavelength_m",
    "com_offset_m", "separation_m", "membrane_reflectivity",
    "membrane_phase_rad", "membrane_index", "membrane_thickness_m",
    "a_start", "a_stop", "a_points", "b_start", "b_stop", "b_points",
    "rm_values", "methods", "mode_index", "mass_kg", "omega_m_rad_s",
    "quality_factor", "gamma_m_rad_s", "finesse",
}


def _request_from_values(values: dict[str, str]) -> ScanRequest:
    unknown = set(values) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    def fval(key: str, default: float | None = None) -> float | None:
        if key not in values:
            if default is None and key == "separation_m":
                raise ConfigError("missing config key 'separation_m'")
            return default
        try:
            return float(values[key])
        except ValueError as err:
            raise ConfigError(f"bad float for {key!r}: {values[key]!r}") from err

    def ival(key: str, default: int | None = None) -> int | None:
        raw = fval(key, None)
        if raw is None:
            return default
        if raw != int(raw):
            raise ConfigError(f"expected integer for {key!r}: {values[key]!r}")
        return int(raw)

    if "membrane_index" in values or "membrane_thickness_m" in values:
        membrane = MembraneSpec.physical(fval("membrane_index"),
                                         fval("membrane_thickness_m"))
    else:
        membrane = MembraneSpec.synthetic(
            fval("membrane_reflectivity", 0.0), fval("membrane_phase_rad", 0.0)
        )
    config = CavityConfig(
        length_m=fval("cavity_length_m", _L),
        mirror_reflectivity=fval("mirror_reflectivity", _R),
        membrane=membrane,
        com_offset_m=fval("com_offset_m", 0.0),
        separation_m=fval("separation_m"),
        wavelength_m=fval("wavelength_m", _LAMBDA),
    )
    mech = None
    if "mass_kg" in values or "omega_m_rad_s" in values:
        if "mass_kg" not in values or "omega_m_rad_s" not in values:
            raise ConfigError("mechanical parameters need both mass_kg and omega_m_rad_s")
        mech = MechanicalSpec(
            mass_kg=fval("mass_kg"),
            omega_m=fval("omega_m_rad_s"),
            gamma_m=fval("gamma_m_rad_s"),
            quality_factor=fval("quality_factor"),
        )
    methods = tuple(
        s.strip() for s in values.get("methods", "exact").split(",") if s.strip()
    )
    rm_values = None
    if "rm_values" in values:
        try:
            rm_values = tuple(
                float(s) for s in values["rm_values"].split(",") if s.strip()
            )
        except ValueError as err:
            raise ConfigError(f"bad rm_values: {values['rm_values']!r}") from err
    kind = values.get("kind", "shift-1d")
    kwargs = {}
    if kind == "shift-2d":
        kwargs = {"b_start": fval("b_start", 0.0), "b_stop": fval("b_stop", 1.0),
                  "b_points": ival("b_points", 101)}
    return ScanRequest(
        kind=kind,
        config=config,
        a_start=fval("a_start", -0.5),
        a_stop=fval("a_stop", 0.5),
        a_points=ival("a_points", 201),
        rm_values=rm_values,
        methods=methods,
        mode_index=ival("mode_index"),
        mech=mech,
        finesse_override=fval("finesse"),
        **kwargs,
    )
