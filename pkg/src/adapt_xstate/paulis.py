"""Pauli-string algebra and ladder-operator building blocks.

Terms are kept in a canonical sparse form (sorted ``(qubit, axis)`` pairs,
identity implied by absence) and double as a bit-mask representation used
by the fast kernels: a string factors as ``i**y * X^x * Z^z`` where the
``x`` mask marks X/Y positions, the ``z`` mask marks Z/Y positions and
``y`` counts Y positions.  All products and commutators reduce to mask
arithmetic plus an integer power of ``i``.

Ladder operators come in two flavors.  The qubit flavor acts on single
qubits only, ``Q+ = (X - iY)/2`` and ``Q = (X + iY)/2``; the fermionic
flavor appends the parity string ``Z_0 ... Z_{i-1}`` that enforces
anti-commutation under the Jordan-Wigner convention (qubit 0 is the least
significant bit).  Excitation generators for ansatz elements are assembled
directly from ladder products, so their signs are fixed by the operator
definitions rather than by transcribed closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .elements import FERMIONIC, QUBIT, ExcitationElement

DEFAULT_PRUNE = 1e-12

_AXES = ("X", "Y", "Z")

_SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliError(ValueError):
    """Raised for malformed Pauli terms or mismatched registers."""


def _check_same_register(a, b):
    if a.n_qubits != b.n_qubits:
        raise PauliError(
            f"register mismatch: {a.n_qubits} vs {b.n_qubits} qubits"
        )


@dataclass(frozen=True)
class PauliTerm:
    """A scaled Pauli string on an n-qubit register.

    Attributes:
        coefficient: complex scalar (Hamiltonian terms are real).
        ops: sorted tuple of ``(qubit, axis)`` pairs, axis in {X, Y, Z};
            an empty tuple is the scaled identity.
        n_qubits: register size.
    """

    coefficient: complex
    ops: tuple[tuple[int, str], ...]
    n_qubits: int

    def __post_init__(self):
        ops = tuple(sorted((int(q), a) for q, a in self.ops))
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        if self.n_qubits < 1:
            raise PauliError(f"n_qubits must be positive, got {self.n_qubits}")
        seen = set()
        for q, axis in ops:
            if axis not in _AXES:
                raise PauliError(f"unknown Pauli axis {axis!r}")
            if q in seen:
                raise PauliError(f"duplicate qubit {q} in term")
            if not 0 <= q < self.n_qubits:
                raise PauliError(
                    f"qubit {q} out of range for {self.n_qubits} qubits"
                )
            seen.add(q)

    @property
    def x_mask(self) -> int:
        """Bit mask of X and Y positions."""
        m = 0
        for q, axis in self.ops:
            if axis != "Z":
                m |= 1 << q
        return m

    @property
    def z_mask(self) -> int:
        """Bit mask of Z and Y positions."""
        m = 0
        for q, axis in self.ops:
            if axis != "X":
                m |= 1 << q
        return m

    @property
    def phase_weight(self) -> complex:
        """Coefficient times ``i**(#Y)``: the weight w in ``w * X^x * Z^z``."""
        n_y = sum(1 for _, axis in self.ops if axis == "Y")
        return self.coefficient * (1j**n_y)

    def scaled(self, factor: complex) -> "PauliTerm":
        return PauliTerm(self.coefficient * factor, self.ops, self.n_qubits)

    def render(self) -> str:
        """Text form ``<coeff> <P><q> ...``, e.g. ``0.5 X0 Z1 Y3``."""
        c = self.coefficient
        if abs(c.imag) < 1e-300:
            head = repr(c.real)
        else:
            head = repr(c)
        body = " ".join(f"{axis}{q}" for q, axis in self.ops)
        return f"{head} {body}".rstrip()

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; basis index bit q is the state of qubit q."""
        axes = dict(self.ops)
        factors = [_SIGMA[axes.get(q, "I")] for q in range(self.n_qubits)]
        return self.coefficient * reduce(np.kron, reversed(factors))

    def __repr__(self):
        return f"PauliTerm({self.render()!r}, n={self.n_qubits})"


def term_from_masks(
    weight: complex, x_mask: int, z_mask: int, n_qubits: int
) -> PauliTerm:
    """Inverse of the ``w * X^x * Z^z`` factorization."""
    ops = []
    n_y = 0
    for q in range(n_qubits):
        bit = 1 << q
        x, z = bool(x_mask & bit), bool(z_mask & bit)
        if x and z:
            ops.append((q, "Y"))
            n_y += 1
        elif x:
            ops.append((q, "X"))
        elif z:
            ops.append((q, "Z"))
    coefficient = weight * (1j ** (-n_y % 4))
    return PauliTerm(coefficient, tuple(ops), n_qubits)


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Product of two terms with the accumulated algebra phase."""
    _check_same_register(a, b)
    # In the w * X^x * Z^z form the product picks up (-1)^|za & xb| from
    # commuting Z^za past X^xb; the weights multiply directly.
    xa, za, xb, zb = a.x_mask, a.z_mask, b.x_mask, b.z_mask
    sign = -1.0 if (za & xb).bit_count() % 2 else 1.0
    weight = a.phase_weight * b.phase_weight * sign
    return term_from_masks(weight, xa ^ xb, za ^ zb, a.n_qubits)


class PauliSum:
    """Canonical real-or-complex weighted sum of Pauli strings.

    Construction merges duplicate strings and prunes coefficients below
    ``prune`` (exact-zero artifacts of the algebra).  Instances are
    treated as immutable.
    """

    __slots__ = ("terms", "n_qubits")

    def __init__(self, terms, n_qubits=None, prune: float = DEFAULT_PRUNE):
        terms = list(terms)
        if n_qubits is None:
            if not terms:
                raise PauliError("cannot infer register size from empty sum")
            n_qubits = terms[0].n_qubits
        merged: dict[tuple, complex] = {}
        for t in terms:
            if t.n_qubits != n_qubits:
                raise PauliError("mixed register sizes in PauliSum")
            merged[t.ops] = merged.get(t.ops, 0.0) + t.coefficient
        kept = [
            PauliTerm(c, ops, n_qubits)
            for ops, c in sorted(merged.items())
            if abs(c) > prune
        ]
        object.__setattr__(self, "terms", tuple(kept))
        object.__setattr__(self, "n_qubits", int(n_qubits))

    def __setattr__(self, name, value):
        raise AttributeError("PauliSum is immutable")

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        _check_same_register(self, other)
        return PauliSum(self.terms + other.terms, self.n_qubits)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "PauliSum":
        return PauliSum(
            [t.scaled(factor) for t in self.terms], self.n_qubits, prune=0.0
        )

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        _check_same_register(self, other)
        return PauliSum(
            [multiply(a, b) for a in self.terms for b in other.terms],
            self.n_qubits,
        )

    def adjoint(self) -> "PauliSum":
        return PauliSum(
            [PauliTerm(t.coefficient.conjugate(), t.ops, t.n_qubits) for t in self],
            self.n_qubits,
        )

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(t.coefficient.imag) <= tol for t in self.terms)

    def abs_coefficient_sum(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            out += t.to_matrix()
        return out

    def mask_arrays(self):
        """Mask representation: (x_masks, z_masks, weights) as numpy arrays.

        The operator equals ``sum_t w_t X^{x_t} Z^{z_t}`` with the Y phases
        folded into the weights; this is the form the kernels consume.
        """
        n = len(self.terms)
        x = np.zeros(n, dtype=np.uint64)
        z = np.zeros(n, dtype=np.uint64)
        w = np.zeros(n, dtype=np.complex128)
        for idx, t in enumerate(self.terms):
            x[idx] = t.x_mask
            z[idx] = t.z_mask
            w[idx] = t.phase_weight
        return x, z, w

    def render(self) -> list[str]:
        return [t.render() for t in self.terms]

    def __repr__(self):
        inner = " + ".join(self.render()[:4])
        more = "" if len(self) <= 4 else f" + ... ({len(self)} terms)"
        return f"PauliSum[{inner}{more}]"


def identity_sum(n_qubits: int, coefficient: complex = 1.0) -> PauliSum:
    return PauliSum([PauliTerm(coefficient, (), n_qubits)], n_qubits)


def zero_sum(n_qubits: int) -> PauliSum:
    return PauliSum([], n_qubits)


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """``a @ b - b @ a`` in canonical pruned form."""
    _check_same_register(a, b)
    return (a @ b) - (b @ a)


@dataclass(frozen=True)
class LadderOp:
    """A creation/annihilation operator on one spin-orbital.

    ``dagger=True`` creates.  The fermionic flavor carries the parity
    string over all lower-index qubits; the qubit flavor acts locally.
    """

    index: int
    dagger: bool
    flavor: str = FERMIONIC

    def __post_init__(self):
        if self.index < 0:
            raise PauliError(f"negative orbital index {self.index}")
        if self.flavor not in (QUBIT, FERMIONIC):
            raise PauliError(f"unknown ladder flavor {self.flavor!r}")


def ladder_to_pauli(op: LadderOp, n_qubits: int) -> PauliSum:
    """Pauli form of a ladder operator: ``(X -+ iY)/2`` times any Z string."""
    if op.index >= n_qubits:
        raise PauliError(
            f"orbital {op.index} out of range for {n_qubits} qubits"
        )
    zs = tuple((r, "Z") for r in range(op.index)) if op.flavor == FERMIONIC else ()
    sign = -1j if op.dagger else 1j
    return PauliSum(
        [
            PauliTerm(0.5, ((op.index, "X"),) + zs, n_qubits),
            PauliTerm(0.5 * sign, ((op.index, "Y"),) + zs, n_qubits),
        ],
        n_qubits,
    )


def _ladder_product(flavor, n_qubits, *ops) -> PauliSum:
    factors = [ladder_to_pauli(LadderOp(i, dag, flavor), n_qubits) for i, dag in ops]
    return reduce(lambda acc, f: acc @ f, factors)


def excitation_generator(element: ExcitationElement, n_qubits: int) -> PauliSum:
    """Skew-Hermitian generator of an excitation evolution, as a PauliSum.

    Assembled from ladder products, so both flavors and all index
    interleavings inherit their signs from the operator definitions.
    Singles give two strings times any parity factors; doubles give the
    eight-string sum with weight i/8 each.
    """
    element.validate_for(n_qubits)
    fl = element.flavor
    if element.order == "single":
        i, k = element.indices
        t = _ladder_product(fl, n_qubits, (i, True), (k, False))
        return t - t.adjoint()
    i, j, k, l = element.indices
    t = _ladder_product(fl, n_qubits, (i, True), (j, True), (k, False), (l, False))
    return t - t.adjoint()
