"""Second-quantized Hamiltonian -> qubit operator (Jordan-Wigner).

Spin orbitals interleave spins (spatial p -> qubits 2p and 2p+1) and
qubit q holds the occupation of spin orbital q, so the Hartree-Fock
determinant is the lowest-index qubits set.  Pauli strings live in a
symplectic encoding: ``(x_mask, z_mask)`` stands for the product
``prod_q X_q^{x_q} Z_q^{z_q}`` (X left of Z on each qubit), which makes
products a pair of XORs plus a sign.
"""

from math import comb

import numpy as np

TERM_CUT = 1e-12
IMAG_TOL = 1e-10


def _below(q: int) -> int:
    return (1 << q) - 1


def multiply_strings(x1: int, z1: int, x2: int, z2: int) -> tuple[int, int, int]:
    """(x1,z1)*(x2,z2) -> (x, z, sign) with sign = +-1 from Z-past-X swaps."""
    sign = -1 if bin(z1 & x2).count("1") % 2 else 1
    return x1 ^ x2, z1 ^ z2, sign


def ladder_strings(orbital: int, dagger: bool):
    """JW image of a_q (or a+_q) as [(x, z, coeff), (x, z, coeff)].

    a_q = 1/2 (X_q + i Y_q) Z_{<q} and Y = i X Z, so in the symplectic
    encoding the two halves differ only in the Z bit on the site.
    """
    x = 1 << orbital
    z_chain = _below(orbital)
    sign_y = 0.5 if dagger else -0.5
    return [
        (x, z_chain, 0.5),
        (x, z_chain | x, sign_y),
    ]


def _accumulate_product(target: dict, factors, coefficient: complex) -> None:
    """Add ``coefficient * prod(factors)`` into the string dictionary."""
    partial = [(0, 0, complex(coefficient))]
    for factor in factors:
        nxt = []
        for x1, z1, c1 in partial:
            for x2, z2, c2 in factor:
                x, z, sign = multiply_strings(x1, z1, x2, z2)
                nxt.append((x, z, c1 * c2 * sign))
        partial = nxt
    for x, z, c in partial:
        key = (x, z)
        target[key] = target.get(key, 0.0) + c


def qubit_hamiltonian(h_mo: np.ndarray, eri_mo: np.ndarray,
                      e_constant: float) -> dict:
    """JW-mapped H as {(x_mask, z_mask): coefficient}.

    ``e_constant`` (nuclear repulsion) lands on the identity string.  The
    two-electron part enters as 1/2 (pq|rs) a+_{p sigma} a+_{r tau}
    a_{s tau} a_{q sigma} with chemist-notation integrals.
    """
    n = h_mo.shape[0]
    acc: dict = {(0, 0): complex(e_constant)}
    for p in range(n):
        for q in range(n):
            if abs(h_mo[p, q]) <= TERM_CUT:
                continue
            for spin in (0, 1):
                _accumulate_product(
                    acc,
                    [ladder_strings(2 * p + spin, True),
                     ladder_strings(2 * q + spin, False)],
                    h_mo[p, q],
                )
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    g = eri_mo[p, q, r, s]
                    if abs(g) <= TERM_CUT:
                        continue
                    for sa in (0, 1):
                        for sb in (0, 1):
                            _accumulate_product(
                                acc,
                                [
                                    ladder_strings(2 * p + sa, True),
                                    ladder_strings(2 * r + sb, True),
                                    ladder_strings(2 * s + sb, False),
                                    ladder_strings(2 * q + sa, False),
                                ],
                                0.5 * g,
                            )
    return acc


def string_to_ops(x: int, z: int, n_qubits: int):
    """Axis list for one symplectic string plus its phase correction.

    Per qubit: x only -> X, z only -> Z, both -> Y; each Y absorbs one
    factor of i because X Z = -i Y.
    """
    ops = []
    n_y = 0
    for q in range(n_qubits):
        bit = 1 << q
        has_x = bool(x & bit)
        has_z = bool(z & bit)
        if has_x and has_z:
            ops.append((q, "Y"))
            n_y += 1
        elif has_x:
            ops.append((q, "X"))
        elif has_z:
            ops.append((q, "Z"))
    return ops, (-1j) ** (n_y % 4)


def pauli_terms(acc: dict, n_qubits: int):
    """Real Pauli terms from the accumulated strings, sorted for output.

    Raises if any surviving coefficient has an imaginary residue, which
    would mean the mapped operator is not Hermitian.
    """
    out = []
    for (x, z), coeff in acc.items():
        if abs(coeff) <= TERM_CUT:
            continue
        ops, phase = string_to_ops(x, z, n_qubits)
        value = coeff * phase
        if abs(value.imag) > IMAG_TOL:
            raise ValueError(
                f"non-Hermitian term {ops}: imaginary part {value.imag:.3e}"
            )
        out.append((ops, float(value.real)))
    out.sort(key=lambda item: (len(item[0]), item[0]))
    return out


def hartree_fock_mask(n_electrons: int) -> int:
    return (1 << n_electrons) - 1


def sector_dimension(n_qubits: int, n_electrons: int) -> int:
    return comb(n_qubits, n_electrons)
