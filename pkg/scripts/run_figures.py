#!/usr/bin/env python3
"""Run the built-in figure recipes and drop CSVs (plus a JSON summary each).

Usage: python scripts/run_figures.py [--only fig2b,fig4] [--outdir results]
"""

import argparse
import json
import pathlib
import sys
import time

from cavimode import PRESET_NAMES, preset, render_csv, render_json, run_scan


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", help="comma list of preset names")
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    names = args.only.split(",") if args.only else [
        n for n in PRESET_NAMES if n != "strong-coupling-report"
    ]
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for name in names:
        t0 = time.perf_counter()
        result = run_scan(preset(name), threads=args.threads)
        if result.records:
            (outdir / f"{name}.csv").write_text(render_csv(result))
        (outdir / f"{name}.json").write_text(render_json(result))
        print(f"{name}: {len(result.records)} rows, "
              f"{result.warning_count} warnings, "
              f"{time.perf_counter() - t0:.1f}s")

    report = run_scan(preset("strong-coupling-report")).summary
    (outdir / "strong_coupling.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n")
    print("strong_coupling.json written")
    return 0


if __name__ == "__main__":
    sys.exit(main())
