"""``evanskit <scenario> --config PATH --out DIR [--seed N] [--threads N]``.

Writes ``result.csv`` and ``summary.txt`` into ``DIR``.  Exit status: 0 on
success, 1 for configuration or usage errors, 2 when a spectral point lies on
the contour or window boundary, 3 for other numerical failures.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

EXIT_OK, EXIT_CONFIG, EXIT_ON_SPECTRUM, EXIT_NUMERICAL = 0, 1, 2, 3
SCENARIO_NAMES = ("interval", "schrod1d", "disc", "maslov", "pencil", "count")


def _threads(arg: int | None) -> int | None:
    if arg is not None:
        return arg
    env = os.environ.get("EVANSKIT_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"EVANSKIT_THREADS must be an integer, got {env!r}")
    return None


def _cell(v) -> str:
    if isinstance(v, float) or (hasattr(v, "dtype") and v.dtype.kind == "f"):
        return "%.17g" % float(v)
    return str(v)


def write_outputs(out: Path, scenario: str, digest: str, result) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "result.csv", "w", newline="") as fh:
        fh.write(f"# evanskit scenario={scenario} config_sha256={digest}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(result.columns)
        for row in result.rows:
            w.writerow([_cell(v) for v in row])
    (out / "summary.txt").write_text(
        f"scenario = {scenario}\nconfig_sha256 = {digest}\n" + "\n".join(result.summary) + "\n"
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="evanskit", description=__doc__.split("\n\n")[0])
    ap.add_argument("scenario", choices=SCENARIO_NAMES)
    ap.add_argument("--config", required=True, type=Path)
    ap.add_argument("--out", required=True, type=Path)
    ap.add_argument("--seed", type=int, default=0, help="recorded only; every scenario is deterministic")
    ap.add_argument("--threads", type=int, default=None, help="BLAS thread count (fallback: EVANSKIT_THREADS)")
    args = ap.parse_args(argv)

    threads = _threads(args.threads)
    if threads is not None:
        if threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return EXIT_CONFIG
        # only effective when the BLAS has not been loaded yet
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(threads))

    from .config import config_hash, parse_config
    from .errors import ConfigError, EvansKitError, NumericalError, OnSpectrum
    from .scenarios import run_scenario

    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text, args.scenario)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run_scenario(cfg)
    except OnSpectrum as exc:
        print(f"error: spectrum on the boundary: {exc}", file=sys.stderr)
        return EXIT_ON_SPECTRUM
    except NumericalError as exc:
        print(f"error: numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (EvansKitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    write_outputs(args.out, cfg.scenario, config_hash(cfg), result)
    print("\n".join(result.summary))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
