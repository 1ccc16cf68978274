"""Exact chain-level homology, S1-equivariant complexes and numerical Morse complexes."""

import sys

from ._cornerhom import (
    MorseAssumptionError,
    ParseError,
    catalog_surfaces,
    equivariant_homology,
    homology,
    morse,
    normalize_complex,
    parse_report,
    run_cli,
    smith_normal_form,
)

__all__ = [
    "MorseAssumptionError",
    "ParseError",
    "betti",
    "catalog_surfaces",
    "equivariant_homology",
    "homology",
    "main",
    "morse",
    "normalize_complex",
    "parse_report",
    "run_cli",
    "smith_normal_form",
]


def betti(groups):
    return [g["betti"] for g in groups]


def main():
    code, out, err = run_cli(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
