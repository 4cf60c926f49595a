"""Command-line front end.

    cavimode scan --preset fig2b --out fig2b.csv
    cavimode scan --config run.cfg --method exact,zeroth --out out.csv
    cavimode report strong-coupling --config run.cfg
    cavimode presets

Exit codes: 0 success (failed grid points are per-row flags and a warning
count on stderr), 2 invalid configuration or arguments, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .errors import ConfigError
from .presets import PRESET_NAMES, parse_request, preset, render_request
from .report import strong_coupling_report
from .scan import render_csv, render_json, run_scan

_REPORT_UNITS = {
    "cavity_length_m": "m",
    "wavelength_m": "m",
    "separation_requested_m": "m",
    "separation_resonant_m": "m",
    "x_zpm_m": "m",
    "omega0_rad_s": "rad/s",
    "g_q_rad_s": "rad/s",
    "g_q_analytic_rad_s": "rad/s",
    "g_sing_rad_s": "rad/s",
    "g_q_max_rad_s": "rad/s",
    "g_q_max_resonant_rad_s": "rad/s",
    "kappa_rad_s": "rad/s",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavimode",
        description="Resonances, couplings and finesse of a two-membrane cavity",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan_p = sub.add_parser("scan", help="run a parameter scan")
    src = scan_p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="built-in recipe name")
    src.add_argument("--config", help="request file (flat key=value)")
    scan_p.add_argument("--method", help="comma list of exact,zeroth,first")
    scan_p.add_argument("--out", default="-", help="output path ('-' = stdout)")
    scan_p.add_argument("--format", choices=("csv", "json"), default="csv")
    scan_p.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: available parallelism)")

    rep_p = sub.add_parser("report", help="print a derived-quantities report")
    rep_p.add_argument("what", choices=("strong-coupling",))
    repsrc = rep_p.add_mutually_exclusive_group()
    repsrc.add_argument("--preset", default="strong-coupling-report")
    repsrc.add_argument("--config")
    rep_p.add_argument("--out", help="also write the report as JSON")

    list_p = sub.add_parser("presets", help="list built-in presets")
    list_p.add_argument("--show", metavar="NAME",
                        help="print one preset as a request file")
    return parser


def _load_request(args) -> "ScanRequest":
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise _IoFailure(str(err)) from err
        overrides = {}
        if getattr(args, "method", None):
            overrides["methods"] = args.method
        return parse_request(text, overrides)
    request = preset(args.preset)
    if getattr(args, "method", None):
        methods = tuple(s.strip() for s in args.method.split(",") if s.strip())
        request = replace(request, methods=methods)
    return request


class _IoFailure(Exception):
    pass


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as err:
        raise _IoFailure(str(err)) from err


def _cmd_scan(args) -> int:
    request = _load_request(args)
    result = run_scan(request, threads=args.threads)
    text = render_json(result) if args.format == "json" else render_csv(result)
    if args.format == "csv" and request.kind == "coupling-report":
        text = render_json(result)  # a single report has no row structure
    _write(args.out, text)
    if result.warning_count:
        print(f"warning: {result.warning_count} grid points failed "
              f"({', '.join(result.summary['errors'])})", file=sys.stderr)
    return 0


def _cmd_report(args) -> int:
    if args.config:
        request = _load_request(args)
    else:
        request = preset(args.preset)
    report = strong_coupling_report(request)
    width = max(len(k) for k in report)
    for key, value in report.items():
        unit = _REPORT_UNITS.get(key, "")
        if value is None:
            rendered = "n/a"
        elif isinstance(value, float):
            rendered = f"{value:.6g}"
        else:
            rendered = str(value)
        print(f"{key:<{width}}  {rendered}{(' ' + unit) if unit else ''}")
    if args.out:
        _write(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_presets(args) -> int:
    if args.show:
        sys.stdout.write(render_request(preset(args.show)))
        return 0
    for name in PRESET_NAMES:
        print(name)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "report":
            return _cmd_report(args)
        return _cmd_presets(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except _IoFailure as err:
        print(f"io error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
