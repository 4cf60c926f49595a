#!/usr/bin/env python3
"""Plot the CSVs produced by run_figures.py.

Usage: python scripts/plot_figures.py [--outdir results]
"""

import argparse
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return data


def plot_shift_lines(data, column, ax, label_by="Rm"):
    for value in np.unique(data[label_by]):
        sel = data[data[label_by] == value]
        ax.plot(sel["a"], sel[column], label=f"{label_by}={value:.6g}")
    ax.set_xlabel("a (separation offset / wavelength)")
    ax.set_ylabel("resonance shift (1/m)")
    ax.legend(fontsize=7)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)

    fig2b = outdir / "fig2b.csv"
    if fig2b.exists():
        data = load(fig2b)
        fig, ax = plt.subplots(figsize=(5, 4))
        plot_shift_lines(data, "dk_exact", ax)
        for value in np.unique(data["Rm"]):
            sel = data[data["Rm"] == value]
            ax.plot(sel["a"], sel["dk_zeroth"], "k--", lw=0.7)
        fig.savefig(outdir / "fig2b.png", dpi=150, bbox_inches="tight")
        print("fig2b.png")

    fig2c = outdir / "fig2c.csv"
    if fig2c.exists():
        data = load(fig2c)
        fig, ax = plt.subplots(figsize=(5, 4))
        plot_shift_lines(data, "dk_exact", ax)
        fig.savefig(outdir / "fig2c.png", dpi=150, bbox_inches="tight")
        print("fig2c.png")

    for name in ("fig3a", "fig3b", "fig3c"):
        path = outdir / f"{name}.csv"
        if not path.exists():
            continue
        data = load(path)
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot(data["a"], data["dk_exact"], ".", ms=3, label="exact")
        ax.plot(data["a"], data["dk_zeroth"], "-", lw=1, label="zeroth")
        ax.plot(data["a"], data["dk_first"], "--", lw=1, label="first")
        ax.set_xlabel("a")
        ax.set_ylabel("resonance shift (1/m)")
        ax.legend(fontsize=7)
        fig.savefig(outdir / f"{name}.png", dpi=150, bbox_inches="tight")
        print(f"{name}.png")

    fig4 = outdir / "fig4.csv"
    if fig4.exists():
        data = load(fig4)
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot(data["a"], data["finesse_numeric"], "r.", ms=4, label="measured")
        ax.plot(data["a"], data["finesse_empty"], "k-", lw=1, label="no membranes")
        ax.set_xlabel("a")
        ax.set_ylabel("finesse")
        ax.legend(fontsize=7)
        fig.savefig(outdir / "fig4.png", dpi=150, bbox_inches="tight")
        print("fig4.png")

    fig2a = outdir / "fig2a.csv"
    if fig2a.exists():
        data = load(fig2a)
        a_vals = np.unique(data["a"])
        b_vals = np.unique(data["b"])
        grid = data["dk_zeroth"].reshape(len(b_vals), len(a_vals))
        fig, ax = plt.subplots(figsize=(5, 4))
        pcm = ax.pcolormesh(a_vals, b_vals, grid, shading="auto")
        fig.colorbar(pcm, ax=ax, label="zeroth-order shift (1/m)")
        ax.set_xlabel("a")
        ax.set_ylabel("b (CoM / wavelength)")
        fig.savefig(outdir / "fig2a.png", dpi=150, bbox_inches="tight")
        print("fig2a.png")
    return 0


if __name__ == "__main__":
    sys.exit(main())
