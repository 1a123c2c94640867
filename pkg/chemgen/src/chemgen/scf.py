"""Restricted Hartree-Fock and the AO -> MO integral transformation."""

from dataclasses import dataclass

import numpy as np

from .basis import build_basis
from .integrals import eri_tensor, kinetic_matrix, nuclear_matrix, overlap_matrix

MAX_CYCLES = 200
E_TOL = 1e-12
GRAD_TOL = 1e-9
DIIS_DEPTH = 8


class SCFError(RuntimeError):
    pass


@dataclass
class SCFResult:
    energy: float                 # total, nuclear repulsion included
    nuclear_repulsion: float
    orbital_energies: np.ndarray
    coefficients: np.ndarray      # AO x MO
    h_core: np.ndarray
    eri: np.ndarray               # AO basis, chemist (pq|rs)
    overlap: np.ndarray
    n_electrons: int
    cycles: int


def nuclear_repulsion(atoms) -> float:
    e = 0.0
    for i, (zi, ri) in enumerate(atoms):
        for zj, rj in atoms[i + 1:]:
            e += zi * zj / float(np.linalg.norm(np.subtract(ri, rj)))
    return e


def _fock(h, eri, density):
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return h + j - 0.5 * k


def restricted_hartree_fock(atoms, n_electrons: int) -> SCFResult:
    if n_electrons % 2:
        raise SCFError("closed-shell RHF needs an even electron count")
    basis = build_basis(atoms)
    s = overlap_matrix(basis)
    h = kinetic_matrix(basis) + nuclear_matrix(basis, atoms)
    eri = eri_tensor(basis)
    e_nuc = nuclear_repulsion(atoms)
    n_occ = n_electrons // 2
    if n_occ > len(basis):
        raise SCFError("more electron pairs than basis functions")

    s_vals, s_vecs = np.linalg.eigh(s)
    if s_vals.min() < 1e-8:
        raise SCFError("near-singular overlap matrix")
    x = s_vecs @ np.diag(s_vals ** -0.5) @ s_vecs.T

    density = np.zeros_like(s)
    energy = 0.0
    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []
    for cycle in range(1, MAX_CYCLES + 1):
        fock = _fock(h, eri, density)
        if cycle > 1:
            # DIIS residual in the orthogonal basis; the zero-density core
            # guess stays out of the history (its residual is exactly zero,
            # which would make the extrapolation prefer it forever)
            residual = x.T @ (fock @ density @ s - s @ density @ fock) @ x
            fock_history.append(fock)
            error_history.append(residual)
        if len(fock_history) > DIIS_DEPTH:
            fock_history.pop(0)
            error_history.pop(0)
        if len(fock_history) > 1:
            m = len(fock_history)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = np.sum(error_history[i] * error_history[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                fock = sum(w * f for w, f in zip(weights, fock_history))
            except np.linalg.LinAlgError:
                pass

        f_ortho = x.T @ fock @ x
        eps, c_ortho = np.linalg.eigh(f_ortho)
        c = x @ c_ortho
        density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T

        fock_current = _fock(h, eri, density)
        new_energy = 0.5 * np.sum(density * (h + fock_current)) + e_nuc
        gradient = np.max(np.abs(fock_current @ density @ s - s @ density @ fock_current))
        if abs(new_energy - energy) < E_TOL and gradient < GRAD_TOL:
            # eigenpairs of the final unextrapolated Fock, not of whatever
            # DIIS combination produced the last step
            eps, c_ortho = np.linalg.eigh(x.T @ fock_current @ x)
            c = x @ c_ortho
            return SCFResult(
                energy=float(new_energy), nuclear_repulsion=e_nuc,
                orbital_energies=eps, coefficients=c, h_core=h, eri=eri,
                overlap=s, n_electrons=n_electrons, cycles=cycle,
            )
        energy = new_energy
    raise SCFError(f"no SCF convergence in {MAX_CYCLES} cycles")


def mo_integrals(result: SCFResult):
    """Core Hamiltonian and chemist-notation ERI in the MO basis."""
    c = result.coefficients
    h_mo = c.T @ result.h_core @ c
    eri_mo = np.einsum("pqrs,pi->iqrs", result.eri, c, optimize=True)
    eri_mo = np.einsum("iqrs,qj->ijrs", eri_mo, c, optimize=True)
    eri_mo = np.einsum("ijrs,rk->ijks", eri_mo, c, optimize=True)
    eri_mo = np.einsum("ijks,sl->ijkl", eri_mo, c, optimize=True)
    return h_mo, eri_mo
