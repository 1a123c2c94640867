"""Numpy implementations of the statevector hot kernels.

Same call signatures as the compiled core; selected automatically when the
extension is not built (or forced via ``ADAPT_XSTATE_KERNELS=py``).

Index conventions: basis index bit q is the occupation of qubit q.  A
rotation kernel touches only the amplitude pairs whose occupations swap
the excited qubits; all enumeration is done by inserting zero bits for
the excited positions into a dense counter, so the loops are allocation
light and order independent.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _insert_zero_bit(values, position):
    low = values & ((1 << position) - 1)
    return ((values >> position) << (position + 1)) | low


def _pair_indices(n_qubits, positions):
    """Base indices with zeros at ``positions`` (ascending), as int64."""
    free = n_qubits - len(positions)
    base = np.arange(1 << free, dtype=np.int64)
    for p in sorted(positions):
        base = _insert_zero_bit(base, p)
    return base


def _parity_sign(values, mask):
    return 1.0 - 2.0 * (np.bitwise_count(values & mask) & 1)


def _between_mask(a, b):
    lo, hi = sorted((a, b))
    return ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)


def _below(p):
    return (1 << p) - 1


def rotate_single(amps, n_qubits, i, k, theta, fermionic):
    """In place ``exp(theta T)`` for a single excitation k -> i."""
    base = _pair_indices(n_qubits, (i, k))
    src = base | (1 << k)
    dst = base | (1 << i)
    c, s = np.cos(theta), np.sin(theta)
    if fermionic:
        s = s * _parity_sign(base, _between_mask(i, k))
    a_src = amps[src]
    a_dst = amps[dst]
    amps[dst] = c * a_dst + s * a_src
    amps[src] = c * a_src - s * a_dst


def rotate_double(amps, n_qubits, i, j, k, l, theta, fermionic):
    """In place ``exp(theta T)`` for a double excitation (k,l) -> (i,j)."""
    base = _pair_indices(n_qubits, (i, j, k, l))
    src = base | (1 << k) | (1 << l)
    dst = base | (1 << i) | (1 << j)
    c, s = np.cos(theta), np.sin(theta)
    if fermionic:
        mask = _below(i) ^ _below(j) ^ _below(k) ^ _below(l)
        s = -s * _parity_sign(base, mask)
    a_src = amps[src]
    a_dst = amps[dst]
    amps[dst] = c * a_dst + s * a_src
    amps[src] = c * a_src - s * a_dst


def generator_single(out, amps, n_qubits, i, k, fermionic):
    """``out = T amps`` for a single excitation generator."""
    base = _pair_indices(n_qubits, (i, k))
    src = base | (1 << k)
    dst = base | (1 << i)
    sign = _parity_sign(base, _between_mask(i, k)) if fermionic else 1.0
    out[:] = 0.0
    out[dst] = sign * amps[src]
    out[src] = -sign * amps[dst]


def generator_double(out, amps, n_qubits, i, j, k, l, fermionic):
    """``out = T amps`` for a double excitation generator."""
    base = _pair_indices(n_qubits, (i, j, k, l))
    src = base | (1 << k) | (1 << l)
    dst = base | (1 << i) | (1 << j)
    if fermionic:
        mask = _below(i) ^ _below(j) ^ _below(k) ^ _below(l)
        sign = -_parity_sign(base, mask)
    else:
        sign = 1.0
    out[:] = 0.0
    out[dst] = sign * amps[src]
    out[src] = -sign * amps[dst]


def group_phase_vector(z_masks, weights, n_qubits):
    """Dense vector ``g[b] = sum_t w_t (-1)^parity(z_t & b)`` for one group."""
    basis = np.arange(1 << n_qubits, dtype=np.int64)
    g = np.zeros(1 << n_qubits, dtype=np.complex128)
    for z, w in zip(z_masks, weights):
        g += w * _parity_sign(basis, int(z))
    return g


def observable_matvec(out, amps, x_masks, g_vectors):
    """``out = H amps`` for a compiled observable (grouped by X mask)."""
    basis = np.arange(amps.shape[0], dtype=np.int64)
    out[:] = 0.0
    for x, g in zip(x_masks, g_vectors):
        idx = basis ^ int(x)
        out += (g * amps)[idx]


def observable_expectation(amps, x_masks, g_vectors):
    """``<amps| H |amps>`` for a compiled observable; returns complex."""
    basis = np.arange(amps.shape[0], dtype=np.int64)
    acc = 0.0 + 0.0j
    for x, g in zip(x_masks, g_vectors):
        idx = basis ^ int(x)
        acc += np.vdot(amps[idx], g * amps)
    return acc
