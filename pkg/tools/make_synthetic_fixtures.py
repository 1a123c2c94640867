#!/usr/bin/env python3
"""Regenerate the committed synthetic problem files in tests/fixtures.

The instances are deterministic (seeded), particle conserving, and small
enough that the test suite can re-verify the embedded exact energies by
dense diagonalization.  Rerunning the script reproduces the files byte
for byte.
"""

import os

import numpy as np

from adapt_xstate.paulis import PauliSum, PauliTerm
from adapt_xstate.problems import MolecularProblem, fci_spectrum, save_problem

FIXTURE_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "tests", "fixtures",
)

# (filename, n_qubits, n_electrons, seed, stored levels)
MANIFEST = [
    ("synthetic_4q.prob", 4, 2, 1, 6),
    ("synthetic_6q.prob", 6, 3, 1, 6),
    ("synthetic_8q.prob", 8, 2, 1, 6),
]


def molecular_toy(n_qubits, n_electrons, seed=1, label="") -> MolecularProblem:
    """Particle-conserving instance with a gapped mean-field-like reference.

    A dominant one-body diagonal (decreasing orbital energies) plus weak
    hopping and pair terms: the lowest-index determinant is a good but not
    exact ground state, which is the regime the adaptive loop targets.
    """
    local = np.random.default_rng(seed)
    specs = []
    for q in range(n_qubits):
        c = 1.2 - 0.12 * q + float(local.normal(0, 0.02))
        specs.append((c, ((q, "Z"),)))
    for i in range(n_qubits):
        for j in range(i + 1, n_qubits):
            if local.random() < 0.6:
                t = float(local.normal(0, 0.08))
                specs.append((t / 2, ((i, "X"), (j, "X"))))
                specs.append((t / 2, ((i, "Y"), (j, "Y"))))
            if local.random() < 0.5:
                specs.append((float(local.normal(0, 0.05)), ((i, "Z"), (j, "Z"))))
    terms = [PauliTerm(complex(c), ops, n_qubits) for c, ops in specs]
    ham = PauliSum(terms, n_qubits=n_qubits)
    return MolecularProblem(
        n_qubits=n_qubits, n_electrons=n_electrons, hamiltonian=ham,
        label=label or f"toy-{n_qubits}q",
    )


def main() -> None:
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    for name, n, ne, seed, levels in MANIFEST:
        problem = molecular_toy(n, ne, seed=seed, label=f"synthetic {n}q toy")
        energies = fci_spectrum(problem, levels)
        full = MolecularProblem(
            n_qubits=n, n_electrons=ne, hamiltonian=problem.hamiltonian,
            label=problem.label, fci_energies=tuple(energies),
        )
        path = os.path.join(FIXTURE_DIR, name)
        save_problem(full, path)
        print(f"wrote {path}  (E0 = {energies[0]:.12f})")


if __name__ == "__main__":
    main()
