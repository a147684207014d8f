#!/usr/bin/env python3
"""Sweep the reachable qubit region boundary for several temperatures.

For each inverse temperature the script writes a CSV of (population,
coherence) boundary points plus the Bloch x/z projection, ready for plotting.
The infinite-temperature boundary is a straight segment; at finite
temperature it bulges.
"""
import json
from pathlib import Path

from thermops.cli import write_curve_csv
from thermops.coherence import qubit_reachable_boundary
from thermops.core import EnergySpectrum, GibbsContext

OUT = Path(__file__).resolve().parent / "out"
P, C = 0.35, 0.35
BETAS = [0.0, 0.5, 1.0, 2.0, 5.0]


def main():
    OUT.mkdir(exist_ok=True)
    summary = {}
    for beta in BETAS:
        ctx = GibbsContext(EnergySpectrum([0.0, 1.0]), beta)
        pts = sorted(qubit_reachable_boundary(P, C, ctx, samples=201))
        write_curve_csv(OUT / f"qubit_region_beta_{beta:g}.csv", pts)
        bloch = [[2 * d, 2 * q - 1] for q, d in pts]
        (OUT / f"qubit_bloch_beta_{beta:g}.json").write_text(json.dumps(bloch))
        summary[f"beta={beta:g}"] = {
            "thermal_population": float(ctx.gibbs.p[0]),
            "points": len(pts),
        }
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
