"""Eigenphase trace of the unitary boundary map for a 1D Schrodinger problem.

Writes one row per grid point with the sorted eigenphases, lists the
crossings of -1 and compares the flow with the contour count.

    python3 scripts/spectral_flow_trace.py --potential 1 --lam1 1 --lam2 40 --csv trace.csv
"""
import argparse
import csv

import numpy as np

from evanskit.maslov import evans_maslov_check, spectral_flow
from evanskit.schrodinger1d import Schrodinger1DProblem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--potential", type=float, default=0.0, help="constant potential value")
    ap.add_argument("--lam1", type=float, default=1.0)
    ap.add_argument("--lam2", type=float, default=40.0)
    ap.add_argument("--grid-step", type=float, default=0.25)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    p = Schrodinger1DProblem.constant(args.potential)
    trace = spectral_flow(p, args.lam1, args.lam2, args.grid_step)
    for c in trace.crossings:
        print(f"crossing at {c.lam:.10f}  kernel dim {c.kernel_dim}  direction {c.direction:+d}")
    exact = (np.arange(1, 200) * np.pi / 2) ** 2 + args.potential
    inside = int(np.sum((exact > args.lam1) & (exact < args.lam2)))
    print(f"flow = {trace.flow}  (Dirichlet eigenvalues in window: {inside})")

    ref = p.shifted(args.lam2 - args.lam1 + 100)
    rep = evans_maslov_check(p, ref, args.lam1, args.lam2, 0.5, args.grid_step)
    print(f"winding {rep.winding}  flow(L) {rep.flow_p}  flow(ref) {rep.flow_phat}  agree {rep.passed}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda"] + [f"phase_{j}" for j in range(trace.phases.shape[1])])
            for lam, ph in zip(trace.grid, trace.phases):
                w.writerow([f"{lam:.12g}"] + [f"{x:.12g}" for x in ph])
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
