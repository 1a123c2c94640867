#!/usr/bin/env python3
"""Regenerate the committed molecular problem files in tests/fixtures/molecules.

Requires the chem-gen package (chemgen/ in this repository).  Each file is a
minimal-basis Hamiltonian at a fixed bond length with enough stored exact
levels to cover the excited-state checks.  Deterministic: rerunning the
script reproduces the files byte for byte.
"""

import os

from chemgen import build_problem
from chemgen.generate import write_problem

FIXTURE_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "tests", "fixtures", "molecules",
)

# (molecule, bond length in angstrom, stored levels)
MANIFEST = [
    ("lih", 1.546, 10),
    ("beh2", 1.316, 10),
    ("beh2", 1.500, 13),
    ("beh2", 1.750, 13),
]


def main() -> None:
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    for name, r, levels in MANIFEST:
        generated = build_problem(name, r, levels=levels)
        path = os.path.join(FIXTURE_DIR, f"{name}_{r:.3f}.prob")
        write_problem(generated, path)
        print(
            f"wrote {path}  ({generated.n_qubits} qubits, "
            f"E_fci = {generated.fci_energies[0]:.12f})"
        )


if __name__ == "__main__":
    main()
