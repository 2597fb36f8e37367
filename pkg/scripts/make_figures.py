#!/usr/bin/env python3
"""Regenerate all figure SVGs and the curve-sample CSVs into out/figures.

Runs the full analysis on the shipped dataset first so the bound figures
carry the experimental points.
"""

from pathlib import Path
import subprocess
import sys

OUT = Path(__file__).resolve().parent.parent / "out" / "figures"


def run(*argv: str) -> None:
    print("+", " ".join(argv))
    subprocess.run([sys.executable, "-m", "sqzqi.cli", *argv], check=True)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    report = OUT / "report.json"
    run("analyze", "--fit", "--report", str(report))
    run("plot", "--fig", "4", "--out", str(OUT / "fig4_ideal_squeezing_vs_pump.svg"))
    for fig in (5, 6, 7):
        run("plot", "--fig", str(fig), "--report", str(report),
            "--out", str(OUT / f"fig{fig}.svg"))
    run("plot", "--fig", "8", "--out", str(OUT / "fig8_trapezoid_family.svg"))
    for curve in ("gaussian-paper", "gaussian-marecki",
                  "lorentzian2-paper", "lorentzian2-marecki"):
        run("bound", "--window", curve.split("-")[0], "--variant", curve.split("-")[1],
            "--ft", "0.01:0.5:0.01", "--out", str(OUT / f"{curve}.csv"))
    print(f"figures written to {OUT}")


if __name__ == "__main__":
    main()
