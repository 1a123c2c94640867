"""Ansatz element descriptors.

An :class:`ExcitationElement` identifies one parameterized unitary of the
ansatz: a single or double excitation evolution, in either the qubit or the
fermionic flavor, acting on a fixed set of spin-orbital indices.  Elements
are immutable; the variational angle is carried alongside (``theta``) so a
bare descriptor doubles as "element at angle 0".

Index conventions
-----------------
Singles are stored as ``(i, k)``: the generator transfers occupation from
qubit ``k`` to qubit ``i``.  Doubles are stored as ``(i, j, k, l)`` with
``i < j``, ``k < l`` and disjoint pairs: occupation moves from the pair
``(k, l)`` to the pair ``(i, j)``.  Since the evolution family is symmetric
under negating the angle, pools keep one canonical representative per
unordered index set (see :func:`canonical_single` / :func:`canonical_double`).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

QUBIT = "qubit"
FERMIONIC = "fermionic"


class ElementError(ValueError):
    """Raised for invalid excitation indices or flavors."""


@dataclass(frozen=True)
class ExcitationElement:
    """One ansatz element: flavor, excitation indices, and its angle.

    Attributes:
        flavor: ``"qubit"`` or ``"fermionic"``.
        indices: ``(i, k)`` for a single excitation or ``(i, j, k, l)``
            for a double (see module docstring for the conventions).
        theta: rotation angle in radians (default 0).
    """

    flavor: str
    indices: tuple[int, ...]
    theta: float = 0.0

    def __post_init__(self):
        if self.flavor not in (QUBIT, FERMIONIC):
            raise ElementError(f"unknown flavor {self.flavor!r}")
        idx = tuple(int(q) for q in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) not in (2, 4):
            raise ElementError(f"need 2 or 4 indices, got {len(idx)}")
        if len(set(idx)) != len(idx):
            raise ElementError(f"indices must be distinct, got {idx}")
        if any(q < 0 for q in idx):
            raise ElementError(f"negative qubit index in {idx}")
        if len(idx) == 4:
            i, j, k, l = idx
            if not (i < j and k < l):
                raise ElementError(
                    f"double excitation needs i<j and k<l, got {idx}"
                )
        if not abs(self.theta) < float("inf"):
            raise ElementError(f"theta must be finite, got {self.theta}")

    @property
    def order(self) -> str:
        """``"single"`` or ``"double"``."""
        return "single" if len(self.indices) == 2 else "double"

    @property
    def is_double(self) -> bool:
        return len(self.indices) == 4

    def with_theta(self, theta: float) -> "ExcitationElement":
        """Copy of this element at a different angle."""
        return replace(self, theta=float(theta))

    def validate_for(self, n_qubits: int) -> None:
        """Raise if any index is out of range for an n-qubit register."""
        if max(self.indices) >= n_qubits:
            raise ElementError(
                f"index {max(self.indices)} out of range for {n_qubits} qubits"
            )

    def __str__(self):
        tag = "s" if self.order == "single" else "d"
        return f"{self.flavor[0]}{tag}{self.indices}"


def single(flavor: str, i: int, k: int, theta: float = 0.0) -> ExcitationElement:
    """Single excitation moving occupation from qubit k to qubit i."""
    return ExcitationElement(flavor, (i, k), theta)


def double(
    flavor: str, i: int, j: int, k: int, l: int, theta: float = 0.0
) -> ExcitationElement:
    """Double excitation moving occupation from pair (k, l) to (i, j)."""
    return ExcitationElement(flavor, (i, j, k, l), theta)


def canonical_single(flavor: str, a: int, b: int) -> ExcitationElement:
    """Pool representative for the unordered pair {a, b}: stored as (min, max)."""
    i, k = sorted((a, b))
    return single(flavor, i, k)


def canonical_double(flavor: str, pair_a, pair_b) -> ExcitationElement:
    """Pool representative for the pairing {pair_a | pair_b}.

    The pair containing the smallest index of the 4-subset goes into the
    ``(i, j)`` slot, so each of the three pairings of a 4-subset has exactly
    one stored form.
    """
    pa, pb = sorted(pair_a), sorted(pair_b)
    if set(pa) & set(pb):
        raise ElementError(f"pairs must be disjoint, got {pa} and {pb}")
    if min(pb) < min(pa):
        pa, pb = pb, pa
    return double(flavor, pa[0], pa[1], pb[0], pb[1])
