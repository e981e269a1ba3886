#!/usr/bin/env python3
"""Produce the CSV/JSON artifact set the figure scripts consume.

Every artifact goes through the command-line front end so the files carry
the documented headers and metadata comments; this driver computes no
mathematics itself.  Artifacts:

  equal_modulus_pair.csv          two-term combination, both terms on |w| = T
  spectrum_boundary_p*.csv        boundary curves for the reference exponents
                                  and for the pair's own two exponents
  norm_growth_*.csv               truncated-norm schedules (growing / flat)
  roe_pair_perk.csv, *.json       per-k functional values and full report
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from hypharm.cli import main as cli


def run(argv: list[str]) -> None:
    code = cli(argv)
    if code != 0:
        sys.exit(code)


def read_meta(path: pathlib.Path) -> dict[str, str]:
    meta = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.startswith("# "):
            break
        key, _, val = line[2:].partition("=")
        meta[key] = val
    return meta


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out")
    ap.add_argument("--space", default="H3")
    ap.add_argument("--p", type=float, default=1.5)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    pair_csv = out / "equal_modulus_pair.csv"
    run(["counterexample", "--space", args.space, "--p", str(args.p),
         "--beta", str(args.beta), "--out", str(pair_csv)])
    pair_meta = read_meta(pair_csv)

    # reference exponents for the nested curves, plus the pair's own two
    exponents = [1.2, 1.5, 2.0, float(pair_meta["q"]), float(pair_meta["r"])]
    for p in exponents:
        run(["spectrum", "--space", args.space, "--p", repr(p),
             "--alpha-max", "3", "--points", "241",
             "--emit-boundary", str(out / f"spectrum_boundary_p{p:g}.csv")])

    for lam, q, tag in (("0", "inf", "phi0_2inf"),
                        ("1", "inf", "phi1_2inf"),
                        ("1", "2", "phi1_22")):
        run(["norms", "--space", args.space, "--lambda", lam, "--p", "2",
             "--q", q, "--rmax", "40", "--rpoints", "15",
             "--jobs", str(args.jobs),
             "--out", str(out / f"norm_growth_{tag}.csv")])

    run(["roe", "--space", args.space, "--preset", "equal-modulus-pair",
         "--p", str(args.p), "--beta", str(args.beta),
         "--kmin", "0", "--kmax", "20",
         "--out", str(out / "roe_pair_report.json"),
         "--csv", str(out / "roe_pair_perk.csv")])
    run(["roe", "--space", args.space, "--preset", "one-sided-pair",
         "--alpha", "1", "--kmin", "-10", "--kmax", "0",
         "--out", str(out / "roe_onesided_report.json"),
         "--csv", str(out / "roe_onesided_perk.csv")])
    return 0


if __name__ == "__main__":
    sys.exit(main())
