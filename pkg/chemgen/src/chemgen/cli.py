"""chem-gen command line: emit problem files for the solver.

Exit codes: 0 success, 2 usage errors.
"""

import argparse
import os
import sys

import numpy as np

from .generate import build_problem, problem_text
from .molecules import MOLECULES
from .scf import SCFError

EXIT_OK = 0
EXIT_USAGE = 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, SCFError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chem-gen",
        description="Generate molecular problem files (STO-3G, full orbital space).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="one molecule at one bond length")
    gen.add_argument("--molecule", required=True, choices=sorted(MOLECULES))
    gen.add_argument("--distance", type=float, required=True,
                     help="bond length in angstrom")
    gen.add_argument("--levels", type=int, default=10,
                     help="exact sector eigenvalues to embed")
    gen.add_argument("--output", required=True)
    gen.set_defaults(func=cmd_generate)

    grid = sub.add_parser("grid", help="a dissociation-curve set of files")
    grid.add_argument("--molecule", required=True, choices=sorted(MOLECULES))
    grid.add_argument("--start", type=float, required=True)
    grid.add_argument("--stop", type=float, required=True)
    grid.add_argument("--step", type=float, required=True)
    grid.add_argument("--levels", type=int, default=10)
    grid.add_argument("--output-dir", required=True)
    grid.set_defaults(func=cmd_grid)

    return parser


def _emit(molecule: str, distance: float, levels: int, path: str) -> None:
    problem = build_problem(molecule, distance, levels=levels)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(problem_text(problem))
    print(
        f"{path}: {problem.n_qubits} qubits, {len(problem.terms)} terms, "
        f"E_scf = {problem.scf_energy:.9f}, E_fci = {problem.fci_energies[0]:.9f}"
    )


def cmd_generate(args) -> int:
    if args.distance <= 0:
        raise ValueError("distance must be positive")
    if args.levels < 1:
        raise ValueError("levels must be >= 1")
    _emit(args.molecule, args.distance, args.levels, args.output)
    return EXIT_OK


def cmd_grid(args) -> int:
    if args.step <= 0 or args.stop < args.start:
        raise ValueError("need step > 0 and stop >= start")
    os.makedirs(args.output_dir, exist_ok=True)
    count = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    for i in range(count):
        r = args.start + i * args.step
        path = os.path.join(args.output_dir, f"{args.molecule}_{r:.3f}.prob")
        _emit(args.molecule, r, args.levels, path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
