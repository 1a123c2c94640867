"""Precompiled observables for fast repeated expectation values.

A Pauli sum is grouped by the X part of its strings: every term in a group
connects basis state b to b ^ x, so the whole group action reduces to one
permutation plus a dense phase vector ``g`` built once from the Z masks.
Applying the observable is then a handful of vectorized passes instead of
one pass per term, which is what the screening and optimization loops
hammer on.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .paulis import PauliSum

MEMORY_LIMIT_BYTES = 1 << 30  # g vectors for one observable


class ObservableCapacityError(RuntimeError):
    """Raised when the grouped representation would not fit in memory."""


class CompiledObservable:
    """Grouped-mask form of a :class:`PauliSum` bound to a register size."""

    def __init__(self, operator: PauliSum):
        self.n_qubits = operator.n_qubits
        self.n_terms = len(operator)
        self.hermitian = operator.is_hermitian()
        dim = 1 << self.n_qubits
        x_all, z_all, w_all = operator.mask_arrays()
        groups: dict[int, list[int]] = {}
        for pos, x in enumerate(x_all):
            groups.setdefault(int(x), []).append(pos)
        if len(groups) * dim * 16 > MEMORY_LIMIT_BYTES:
            raise ObservableCapacityError(
                f"{len(groups)} X-mask groups on {self.n_qubits} qubits "
                "exceed the compiled-observable memory limit"
            )
        self.x_masks: list[int] = []
        self.g_vectors: list[np.ndarray] = []
        for x, positions in sorted(groups.items()):
            g = kernels.group_phase_vector(
                z_all[positions], w_all[positions], self.n_qubits
            )
            if np.abs(g.imag).max(initial=0.0) < 1e-14:
                g = np.ascontiguousarray(g.real)
            self.x_masks.append(x)
            self.g_vectors.append(g)

    def expectation(self, amps: np.ndarray) -> complex:
        amps = np.ascontiguousarray(amps, dtype=np.complex128)
        return complex(
            kernels.observable_expectation(amps, self.x_masks, self.g_vectors)
        )

    def matvec(self, amps: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        # the compiled kernels take contiguous views; a no-op for engine states
        amps = np.ascontiguousarray(amps, dtype=np.complex128)
        if out is None:
            out = np.empty_like(amps)
        kernels.observable_matvec(out, amps, self.x_masks, self.g_vectors)
        return out

    def sector_matrix(self, sector_indices: np.ndarray) -> np.ndarray:
        """Dense matrix block over the given basis indices.

        The indices must be closed under the observable's permutations
        (true for any particle-number-conserving operator restricted to a
        Hamming-weight sector); connections leaving the set raise.  Leaks
        below rounding dust relative to the operator scale are ignored:
        they contribute to no in-sector element, and symmetry-related
        coefficient pairs summed in different orders rarely cancel to the
        exact zero the strict check would demand.
        """
        dim = 1 << self.n_qubits
        pos = np.full(dim, -1, dtype=np.int64)
        pos[sector_indices] = np.arange(len(sector_indices))
        scale = max((np.abs(g).max(initial=0.0) for g in self.g_vectors), default=0.0)
        leak_tol = 1e-12 * max(scale, 1.0)
        block = np.zeros((len(sector_indices), len(sector_indices)), dtype=complex)
        for x, g in zip(self.x_masks, self.g_vectors):
            targets = sector_indices ^ x
            where = pos[targets]
            coupled = g[sector_indices] != 0.0
            outside = (where < 0) & coupled
            if np.any(outside) and np.abs(g[sector_indices[outside]]).max() > leak_tol:
                raise ValueError(
                    "observable couples the sector to outside states"
                )
            keep = coupled & (where >= 0)
            block[where[keep], np.arange(len(sector_indices))[keep]] += g[
                sector_indices[keep]
            ]
        return block


class PenaltyEvaluator:
    """Base observable plus rank-one overlap penalties.

    Evaluates ``<psi|H|psi> + sum_r alpha_r |<E_r|psi>|^2`` and the matching
    operator action ``H psi + sum_r alpha_r <E_r|psi> E_r`` used by the
    adjoint gradient sweep.
    """

    def __init__(self, base: CompiledObservable, penalties=()):
        self.base = base
        self.penalties = [
            (float(alpha), np.asarray(vec, dtype=np.complex128))
            for alpha, vec in penalties
        ]

    @property
    def n_qubits(self) -> int:
        return self.base.n_qubits

    def energy(self, amps: np.ndarray) -> float:
        value = self.base.expectation(amps).real
        for alpha, vec in self.penalties:
            value += alpha * abs(np.vdot(vec, amps)) ** 2
        return value

    def apply(self, amps: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        out = self.base.matvec(amps, out)
        for alpha, vec in self.penalties:
            out += (alpha * np.vdot(vec, amps)) * vec
        return out
