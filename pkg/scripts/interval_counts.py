"""Count Robin/Dirichlet comparison zeros on (0, 1) over a sweep of windows.

    python3 scripts/interval_counts.py --lam-max 400 --width 60
"""
import argparse
import time

import numpy as np

from evanskit.contour import count_eigs
from evanskit.intervalmodel import Theta2x2, det_n_theta, dirichlet_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lam-max", type=float, default=400.0)
    ap.add_argument("--width", type=float, default=60.0)
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--theta", type=complex, default=1j, help="scalar Robin coupling, python syntax (e.g. 2j)")
    args = ap.parse_args()

    th = Theta2x2.scalar(args.theta)
    f = lambda z: det_n_theta(z, th)  # noqa: E731
    print(f"{'lambda1':>9} {'lambda2':>9} {'count':>6} {'exact':>6} {'ms':>7}")
    mismatches = 0
    for a in np.arange(0.5, args.lam_max, args.width):
        b = a + args.width
        t = time.perf_counter()
        n = count_eigs(f, a, b, args.delta, vectorized=True)
        ms = 1e3 * (time.perf_counter() - t)
        exact = dirichlet_count(a, b)
        mismatches += n != exact
        print(f"{a:9.2f} {b:9.2f} {n:6d} {exact:6d} {ms:7.1f}")
    print(f"mismatches: {mismatches}")


if __name__ == "__main__":
    main()
