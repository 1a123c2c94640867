"""Dense statevector engine.

Amplitudes are a length ``2**n`` complex vector; basis index b has qubit q
occupied iff bit q of b is set, so qubit 0 (spin-orbital 0) is the least
significant bit.  Excitation evolutions act as Givens rotations on the
amplitude pairs whose occupations swap the excited qubits, with the
fermionic flavor adding the Jordan-Wigner parity sign per pair; nothing
else is touched, so applications cost O(2^n) with small constants.

Unitarity is watched, not patched: norm drift beyond 1e-8 raises instead
of silently renormalizing.
"""

from __future__ import annotations

import struct

import numpy as np

from . import kernels
from .elements import ExcitationElement
from .observables import CompiledObservable
from .paulis import PauliSum, PauliTerm

QSV_MAGIC = b"QSV1"

NORM_TOLERANCE = 1e-8


class StateError(ValueError):
    """Raised for dimension mismatches or invalid state construction."""


class NumericalHealthError(RuntimeError):
    """Raised when the state norm drifts beyond tolerance."""


class StateVector:
    """Normalized amplitude vector over the computational basis."""

    __slots__ = ("amplitudes", "n_qubits")

    def __init__(self, amplitudes, n_qubits=None, check: bool = True):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if n_qubits is None:
            n_qubits = int(amps.shape[0]).bit_length() - 1
        if amps.shape != (1 << n_qubits,):
            raise StateError(
                f"amplitude vector of length {amps.shape[0]} does not match "
                f"{n_qubits} qubits"
            )
        self.amplitudes = amps
        self.n_qubits = int(n_qubits)
        if check:
            self.check_norm()

    @classmethod
    def computational_basis(cls, n_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, n_qubits, check=False)

    def copy(self) -> "StateVector":
        out = StateVector.__new__(StateVector)
        out.amplitudes = self.amplitudes.copy()
        out.n_qubits = self.n_qubits
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_norm(self, tol: float = NORM_TOLERANCE) -> None:
        drift = abs(self.norm() - 1.0)
        if drift > tol:
            raise NumericalHealthError(
                f"state norm drifted by {drift:.3e} (tolerance {tol:.0e})"
            )

    def apply_excitation(
        self, element: ExcitationElement, theta: float | None = None
    ) -> "StateVector":
        """In place ``exp(theta T) |psi>``; returns self for chaining."""
        element.validate_for(self.n_qubits)
        angle = element.theta if theta is None else float(theta)
        fermionic = element.flavor == "fermionic"
        if element.order == "single":
            i, k = element.indices
            kernels.rotate_single(self.amplitudes, self.n_qubits, i, k, angle, fermionic)
        else:
            i, j, k, l = element.indices
            kernels.rotate_double(
                self.amplitudes, self.n_qubits, i, j, k, l, angle, fermionic
            )
        self.check_norm()
        return self

    def apply_generator(self, element: ExcitationElement) -> "StateVector":
        """New state ``T |psi>`` (not normalized; T is skew-Hermitian)."""
        element.validate_for(self.n_qubits)
        out = np.empty_like(self.amplitudes)
        fermionic = element.flavor == "fermionic"
        if element.order == "single":
            i, k = element.indices
            kernels.generator_single(out, self.amplitudes, self.n_qubits, i, k, fermionic)
        else:
            i, j, k, l = element.indices
            kernels.generator_double(
                out, self.amplitudes, self.n_qubits, i, j, k, l, fermionic
            )
        result = StateVector.__new__(StateVector)
        result.amplitudes = out
        result.n_qubits = self.n_qubits
        return result

    def apply_pauli_exponential(self, term: PauliTerm, angle: float) -> "StateVector":
        """In place ``exp(i angle P) |psi>`` for a +-1 weighted Pauli string."""
        if term.n_qubits != self.n_qubits:
            raise StateError("operator register does not match state")
        c = term.coefficient
        if abs(abs(c) - 1.0) > 1e-12 or abs(c.imag) > 1e-12:
            raise StateError(
                f"Pauli exponential needs a +-1 coefficient, got {c}"
            )
        x, z, w = term.x_mask, term.z_mask, term.phase_weight
        basis = np.arange(self.amplitudes.shape[0], dtype=np.int64)
        signs = 1.0 - 2.0 * (np.bitwise_count(basis & z) & 1)
        permuted = (w * signs * self.amplitudes)[basis ^ x]
        self.amplitudes *= np.cos(angle)
        self.amplitudes += 1j * np.sin(angle) * permuted
        self.check_norm()
        return self

    def inner_product(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        if other.n_qubits != self.n_qubits:
            raise StateError("states live on different registers")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def expectation(self, observable) -> float:
        """Real ``<psi|O|psi>`` for a Hermitian PauliSum (or compiled form)."""
        compiled = _as_compiled(observable)
        if compiled.n_qubits != self.n_qubits:
            raise StateError("observable register does not match state")
        if not compiled.hermitian:
            raise StateError("expectation requires a Hermitian observable")
        value = compiled.expectation(self.amplitudes)
        if abs(value.imag) > 1e-10:
            raise NumericalHealthError(
                f"imaginary residue {value.imag:.3e} in Hermitian expectation"
            )
        return float(value.real)

    def save(self, path) -> None:
        """Write the QSV1 binary dump (magic, u32 n_qubits, LE re/im pairs)."""
        with open(path, "wb") as fh:
            fh.write(QSV_MAGIC)
            fh.write(struct.pack("<I", self.n_qubits))
            fh.write(np.ascontiguousarray(self.amplitudes, dtype="<c16").tobytes())

    @classmethod
    def load(cls, path) -> "StateVector":
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != QSV_MAGIC:
                raise StateError(f"{path}: not a QSV1 state file")
            (n_qubits,) = struct.unpack("<I", fh.read(4))
            data = fh.read()
        expected = (1 << n_qubits) * 16
        if len(data) != expected:
            raise StateError(
                f"{path}: expected {expected} amplitude bytes, got {len(data)}"
            )
        amps = np.frombuffer(data, dtype="<c16").astype(np.complex128)
        return cls(amps, n_qubits)


def _as_compiled(observable) -> CompiledObservable:
    if isinstance(observable, CompiledObservable):
        return observable
    if isinstance(observable, PauliSum):
        return compile_observable(observable)
    raise TypeError(f"cannot take expectation of {type(observable).__name__}")


_COMPILE_CACHE: dict[int, tuple[PauliSum, CompiledObservable]] = {}


def compile_observable(operator: PauliSum) -> CompiledObservable:
    """Grouped form of a PauliSum, memoized per instance."""
    key = id(operator)
    hit = _COMPILE_CACHE.get(key)
    if hit is not None and hit[0] is operator:
        return hit[1]
    compiled = CompiledObservable(operator)
    if len(_COMPILE_CACHE) > 64:
        _COMPILE_CACHE.clear()
    _COMPILE_CACHE[key] = (operator, compiled)
    return compiled


def prepare_reference(n_qubits: int, n_electrons: int) -> StateVector:
    """Hartree-Fock style basis state: lowest n_electrons qubits occupied."""
    if not 0 <= n_electrons <= n_qubits:
        raise StateError(
            f"cannot place {n_electrons} electrons in {n_qubits} spin-orbitals"
        )
    return StateVector.computational_basis(n_qubits, (1 << n_electrons) - 1)


def apply_excitation(
    state: StateVector, element: ExcitationElement, theta: float | None = None
) -> StateVector:
    return state.apply_excitation(element, theta)


def expectation(state: StateVector, observable) -> float:
    return state.expectation(observable)


def inner_product(a: StateVector, b: StateVector) -> complex:
    return a.inner_product(b)
