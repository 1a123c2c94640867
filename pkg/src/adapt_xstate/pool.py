"""Ansatz element pools.

The full pools contain every unique single (C(N,2)) and every unique
double: each 4-subset of qubits contributes the 3 distinct ways to split
it into two pairs, giving 3*C(N,4) doubles.  Enumeration is lexicographic
with singles first, so pool indices are stable and tie-breaking in the
adaptive loop is reproducible.
"""

from __future__ import annotations

import csv
from itertools import combinations
from math import comb

from .elements import FERMIONIC, QUBIT, ExcitationElement, canonical_double, canonical_single


def pool_size(n_qubits: int) -> int:
    return comb(n_qubits, 2) + 3 * comb(n_qubits, 4)


def _full_pool(n_qubits: int, flavor: str) -> list[ExcitationElement]:
    if n_qubits < 2:
        raise ValueError(f"pool needs at least 2 qubits, got {n_qubits}")
    elements = [
        canonical_single(flavor, i, k) for i, k in combinations(range(n_qubits), 2)
    ]
    for a, b, c, d in combinations(range(n_qubits), 4):
        # the three pairings of {a<b<c<d}; the pair holding a sits first
        elements.append(canonical_double(flavor, (a, b), (c, d)))
        elements.append(canonical_double(flavor, (a, c), (b, d)))
        elements.append(canonical_double(flavor, (a, d), (b, c)))
    return elements


def qubit_pool(n_qubits: int, spin_preserving: bool = False) -> list[ExcitationElement]:
    """All unique single and double qubit excitations.

    ``spin_preserving`` keeps only elements conserving the number of even
    and of odd indices (interleaved spin convention); off by default since
    the full pool places no such restriction.
    """
    pool = _full_pool(n_qubits, QUBIT)
    return [e for e in pool if _preserves_spin(e)] if spin_preserving else pool


def fermionic_pool(
    n_qubits: int, spin_preserving: bool = False
) -> list[ExcitationElement]:
    """All unique single and double fermionic excitation evolutions."""
    pool = _full_pool(n_qubits, FERMIONIC)
    return [e for e in pool if _preserves_spin(e)] if spin_preserving else pool


def _preserves_spin(element: ExcitationElement) -> bool:
    if element.order == "single":
        i, k = element.indices
        return i % 2 == k % 2
    i, j, k, l = element.indices
    return sorted((i % 2, j % 2)) == sorted((k % 2, l % 2))


def uccsd_elements(n_qubits: int, n_electrons: int) -> list[ExcitationElement]:
    """Occupied-to-virtual fermionic excitations above the reference.

    Singles k(occ) -> i(virt); doubles k<l (occ) -> i<j (virt).  Count is
    occ*virt + C(occ,2)*C(virt,2).
    """
    if not 0 < n_electrons < n_qubits:
        raise ValueError(
            f"need 0 < n_electrons < n_qubits, got {n_electrons}/{n_qubits}"
        )
    occ = range(n_electrons)
    virt = range(n_electrons, n_qubits)
    elements = [
        canonical_single(FERMIONIC, i, k) for k in occ for i in virt
    ]
    for k, l in combinations(occ, 2):
        for i, j in combinations(virt, 2):
            elements.append(canonical_double(FERMIONIC, (i, j), (k, l)))
    return elements


def export_pool_csv(elements, path, stamp: str | None = None) -> None:
    """Write the pool listing as ``kind,flavor,i,j,k,l`` rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if stamp:
            fh.write(f"# {stamp}\n")
        writer = csv.writer(fh)
        writer.writerow(["kind", "flavor", "i", "j", "k", "l"])
        for e in elements:
            if e.order == "single":
                i, k = e.indices
                writer.writerow(["single", e.flavor, i, "", k, ""])
            else:
                i, j, k, l = e.indices
                writer.writerow(["double", e.flavor, i, j, k, l])
