#!/usr/bin/env python3
"""Run every subcommand's --selftest; nonzero exit if any fails."""

import sys

from hypharm.cli import main as cli

SUBCOMMANDS = ("spherical", "cfit", "norms", "spectrum",
               "counterexample", "poisson", "roe", "euclid")


def main() -> int:
    failed = [s for s in SUBCOMMANDS if cli([s, "--selftest"]) != 0]
    if failed:
        print("selftest failures: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
