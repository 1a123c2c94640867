"""Determinant CI: exact spectra inside a fixed electron-count sector.

Determinants are occupation bitstrings over interleaved spin orbitals
(spatial orbital p gives spin-up index 2p and spin-down 2p+1).  The
Hamiltonian is applied directly as second-quantized strings on those
integers, with fermionic signs from parity counts; no Pauli algebra is
involved, so this is an independent check of the qubit mapping.  S_z is
conserved, so each (n_alpha, n_beta) block diagonalizes separately and
the sector spectrum is the merge over blocks.
"""

from itertools import combinations

import numpy as np

COEFF_CUT = 1e-14


def block_determinants(n_spatial: int, n_alpha: int, n_beta: int) -> np.ndarray:
    """All bitstrings of the (n_alpha, n_beta) block, ascending."""
    alphas = [
        sum(1 << (2 * p) for p in occ)
        for occ in combinations(range(n_spatial), n_alpha)
    ]
    betas = [
        sum(1 << (2 * p + 1) for p in occ)
        for occ in combinations(range(n_spatial), n_beta)
    ]
    dets = sorted(a | b for a in alphas for b in betas)
    return np.array(dets, dtype=np.int64)


def _parity(values: np.ndarray, mask: int) -> np.ndarray:
    return 1.0 - 2.0 * (np.bitwise_count(values & mask) & 1)


def _below(p: int) -> int:
    return (1 << p) - 1


def _spin_orbital_terms(h_mo: np.ndarray, eri_mo: np.ndarray):
    """Yield (indices, coefficient) for h and for 1/2 (pq|rs) strings.

    One-electron entries come as (p, q); two-electron as (p, q, r, s)
    meaning ``a+_p a+_r a_s a_q`` with both spin assignments expanded.
    """
    n = h_mo.shape[0]
    ones = []
    for p in range(n):
        for q in range(n):
            if abs(h_mo[p, q]) > COEFF_CUT:
                for spin in (0, 1):
                    ones.append(((2 * p + spin, 2 * q + spin), h_mo[p, q]))
    twos = []
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    g = eri_mo[p, q, r, s]
                    if abs(g) <= COEFF_CUT:
                        continue
                    for sa in (0, 1):
                        for sb in (0, 1):
                            twos.append((
                                (2 * p + sa, 2 * q + sa, 2 * r + sb, 2 * s + sb),
                                0.5 * g,
                            ))
    return ones, twos


def _apply_chain(dets: np.ndarray, ops) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Apply annihilation/creation steps right to left on all determinants.

    ``ops`` is a list of (orbital, create?) in application order.  Returns
    (surviving positions, resulting determinants, signs).
    """
    alive = np.arange(len(dets))
    current = dets.copy()
    signs = np.ones(len(dets))
    for orbital, create in ops:
        bit = 1 << orbital
        occupied = (current & bit) != 0
        keep = ~occupied if create else occupied
        alive = alive[keep]
        current = current[keep]
        # both cases count occupations below the orbital in the pre-flip string
        signs = signs[keep] * _parity(current, _below(orbital))
        current = current ^ bit
    return alive, current, signs


def build_block_hamiltonian(dets: np.ndarray, h_mo, eri_mo) -> np.ndarray:
    index_of = {int(d): i for i, d in enumerate(dets)}
    dim = len(dets)
    ham = np.zeros((dim, dim))
    ones, twos = _spin_orbital_terms(h_mo, eri_mo)

    for (p, q), coeff in ones:
        alive, out, signs = _apply_chain(dets, [(q, False), (p, True)])
        cols = alive
        rows = np.array([index_of[int(d)] for d in out], dtype=np.int64)
        np.add.at(ham, (rows, cols), coeff * signs)
    for (p, q, r, s), coeff in twos:
        alive, out, signs = _apply_chain(
            dets, [(q, False), (s, False), (r, True), (p, True)]
        )
        cols = alive
        rows = np.array([index_of[int(d)] for d in out], dtype=np.int64)
        np.add.at(ham, (rows, cols), coeff * signs)
    return ham


def sector_spectrum(h_mo, eri_mo, n_electrons: int, k: int,
                    e_constant: float = 0.0) -> list[float]:
    """The ``k`` lowest eigenvalues over every S_z block of the sector."""
    n_spatial = h_mo.shape[0]
    values: list[float] = []
    for n_alpha in range(max(0, n_electrons - n_spatial),
                         min(n_electrons, n_spatial) + 1):
        n_beta = n_electrons - n_alpha
        dets = block_determinants(n_spatial, n_alpha, n_beta)
        if len(dets) == 0:
            continue
        ham = build_block_hamiltonian(dets, h_mo, eri_mo)
        asym = np.max(np.abs(ham - ham.T))
        if asym > 1e-9:
            raise RuntimeError(f"CI block not symmetric ({asym:.2e})")
        values.extend(np.linalg.eigvalsh(ham).tolist())
    values.sort()
    return [v + e_constant for v in values[:k]]
