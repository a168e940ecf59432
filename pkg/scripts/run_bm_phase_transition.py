#!/usr/bin/env python3
"""Locate the Brownian-motion regularity phase transition empirically.

Sweeps the dyadic-criterion exponent alpha across the critical value 1/2,
prints the per-alpha verdict table, and writes the JSON/CSV reports.

Usage: python3 scripts/run_bm_phase_transition.py [out_dir]
"""

import sys
from pathlib import Path

from besovlab import ExperimentConfig, Grid, GeneratorSpec, run_alpha_sweep


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("bm_phase_transition")
    config = ExperimentConfig(
        generator=GeneratorSpec("bm", Grid(0.0, 1.0, 14), seed=2026),
        p=2.0,
        alpha_grid=tuple(round(0.30 + 0.05 * i, 2) for i in range(9)),
        n_levels=12,
        replicates=100,
        workers=4,
    )
    report = run_alpha_sweep(config)
    print("alpha  median_slope  conv  div  inc")
    for row in report.rows:
        print(
            f"{row.alpha:5.2f}  {row.median_slope:12.4f}  "
            f"{row.frac_converges:4.2f} {row.frac_diverges:4.2f} "
            f"{row.frac_inconclusive:4.2f}"
        )
    print(f"estimated critical alpha: {report.critical_alpha}")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(report.to_json())
    (out_dir / "report.csv").write_text(report.to_csv())
    print(f"reports written to {out_dir}/")


if __name__ == "__main__":
    main()
