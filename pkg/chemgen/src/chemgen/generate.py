"""End-to-end problem construction and the text emitter.

The emitted format (one key per line, ``repr`` coefficients) is the
interchange contract with the solver package:

    format: adapt-xstate/problem v1
    label: LiH sto-3g r = 1.546
    n_qubits: 12
    n_electrons: 4
    fci: -7.88... -7.76...
    term: 0.5 Z0 Z1
"""

from dataclasses import dataclass

from .ci import sector_spectrum
from .mapping import pauli_terms, qubit_hamiltonian
from .molecules import build
from .scf import mo_integrals, restricted_hartree_fock

FORMAT_LINE = "adapt-xstate/problem v1"


@dataclass
class GeneratedProblem:
    name: str
    distance: float
    n_qubits: int
    n_electrons: int
    scf_energy: float
    fci_energies: list[float]
    terms: list  # (ops, coefficient) with ops = [(qubit, axis), ...]
    label: str


def build_problem(name: str, r: float, levels: int = 10) -> GeneratedProblem:
    atoms, n_electrons, display = build(name, r)
    scf = restricted_hartree_fock(atoms, n_electrons)
    h_mo, eri_mo = mo_integrals(scf)
    n_qubits = 2 * h_mo.shape[0]

    acc = qubit_hamiltonian(h_mo, eri_mo, scf.nuclear_repulsion)
    terms = pauli_terms(acc, n_qubits)
    fci = sector_spectrum(
        h_mo, eri_mo, n_electrons, levels, e_constant=scf.nuclear_repulsion
    )
    if fci[0] > scf.energy + 1e-9:
        raise RuntimeError(
            f"CI ground {fci[0]:.9f} above the mean field {scf.energy:.9f}"
        )
    return GeneratedProblem(
        name=name, distance=r, n_qubits=n_qubits, n_electrons=n_electrons,
        scf_energy=scf.energy, fci_energies=fci, terms=terms,
        label=f"{display} sto-3g r = {r:g}",
    )


def problem_text(problem: GeneratedProblem) -> str:
    lines = [
        f"format: {FORMAT_LINE}",
        f"label: {problem.label}",
        f"n_qubits: {problem.n_qubits}",
        f"n_electrons: {problem.n_electrons}",
        "fci: " + " ".join(repr(e) for e in problem.fci_energies),
    ]
    for ops, coefficient in problem.terms:
        body = " ".join(f"{axis}{q}" for q, axis in ops)
        lines.append(f"term: {repr(coefficient)} {body}".rstrip())
    return "\n".join(lines) + "\n"


def write_problem(problem: GeneratedProblem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(problem_text(problem))
