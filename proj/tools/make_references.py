#!/usr/bin/env python3
"""Regenerate the fine-grid first-order density references in tests/data.

Each reference is a 10,000-cell run of the pure subcell first-order mode at N = 1. The two
solution points of every element carry equal weights, so their average is the element mean.
"""
import argparse
import csv
import pathlib
import subprocess
import tempfile

PROBLEMS = ["rp1_1d", "rp2_1d", "rp3_1d", "rp4_1d", "density_perturbation_1d"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--solver", default="build/tools/rhd_lwfr")
    ap.add_argument("--out", default="tests/data")
    ap.add_argument("--cells", type=int, default=10000)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for pid in PROBLEMS:
        with tempfile.TemporaryDirectory() as tmp:
            subprocess.run([args.solver, "solve", "--problem", pid, "--limiter", "fo", "--degree", "1",
                            "--cells", str(args.cells), "--out", tmp], check=True, stdout=subprocess.DEVNULL)
            final = sorted(pathlib.Path(tmp).glob(f"{pid}_*.csv"))[-1]
            with final.open() as f:
                rows = list(csv.DictReader(f))
        with (out / f"{pid}_reference.csv").open("w", newline="") as f:
            f.write("x,rho\n")
            for a, b in zip(rows[0::2], rows[1::2]):
                x = 0.5 * (float(a["x"]) + float(b["x"]))
                rho = 0.5 * (float(a["rho"]) + float(b["rho"]))
                f.write(f"{x:.6f},{rho:.10g}\n")
        print(f"wrote {pid}")


if __name__ == "__main__":
    main()
