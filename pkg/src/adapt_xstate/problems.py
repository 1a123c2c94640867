"""Problem interchange format, penalty construction, and the exact oracle.

A problem file is line-oriented UTF-8 text:

    format: adapt-xstate/problem v1
    label: LiH sto-3g r=1.546
    n_qubits: 12
    n_electrons: 4
    fci: -7.882 -7.762
    term: -0.25 X0 X1 Y2 Y3
    term: 0.5

Spin-orbitals interleave spins: even qubit index is the spin-up and odd
the spin-down component of the same spatial orbital.  Coefficients are
written with ``repr`` so a serialize/parse cycle is bit exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .observables import CompiledObservable
from .paulis import PauliSum, PauliTerm
from .state import StateVector, compile_observable

FORMAT_LINE = "adapt-xstate/problem v1"

# full dense diagonalization above this register size is pointless here
FULL_DENSE_LIMIT = 12
SECTOR_DENSE_LIMIT = 16

_TERM_OP = re.compile(r"^([XYZ])(\d+)$")


class ProblemFormatError(ValueError):
    """Parse failure; message carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CapacityError(RuntimeError):
    """Requested dense diagonalization exceeds the size limits."""


@dataclass
class MolecularProblem:
    """A qubit-mapped molecular Hamiltonian plus bookkeeping."""

    n_qubits: int
    n_electrons: int
    hamiltonian: PauliSum
    label: str = ""
    fci_energies: tuple[float, ...] = ()

    def __post_init__(self):
        if self.hamiltonian.n_qubits != self.n_qubits:
            raise ValueError(
                f"hamiltonian acts on {self.hamiltonian.n_qubits} qubits, "
                f"problem declares {self.n_qubits}"
            )
        if not 0 <= self.n_electrons <= self.n_qubits:
            raise ValueError(
                f"n_electrons {self.n_electrons} outside [0, {self.n_qubits}]"
            )
        if not self.hamiltonian.is_hermitian():
            raise ValueError("problem Hamiltonian must have real coefficients")
        self.fci_energies = tuple(float(e) for e in self.fci_energies)

    @property
    def fci_ground(self) -> float | None:
        return self.fci_energies[0] if self.fci_energies else None


@dataclass
class PenalizedHamiltonian:
    """Base observable plus overlap penalties for excited-state searches.

    Energy functional: ``<psi|base|psi> + sum_r alpha_r |<E_r|psi>|^2``.
    Each penalty lifts its stored state out of the low end of the spectrum
    so a ground-state minimization lands on the next level up.
    """

    base: PauliSum
    penalties: list[tuple[float, StateVector]] = field(default_factory=list)

    def __post_init__(self):
        for alpha, vec in self.penalties:
            if alpha <= 0:
                raise ValueError(f"penalty weight must be positive, got {alpha}")
            if vec.n_qubits != self.base.n_qubits:
                raise ValueError("penalty state register does not match base")
            vec.check_norm()

    def evaluator(self) -> "CompiledObservable | object":
        from .observables import PenaltyEvaluator

        compiled = compile_observable(self.base)
        return PenaltyEvaluator(
            compiled, [(a, v.amplitudes) for a, v in self.penalties]
        )


def penalized_expectation(h: PenalizedHamiltonian, state: StateVector) -> float:
    value = state.expectation(h.base)
    for alpha, vec in h.penalties:
        value += alpha * abs(vec.inner_product(state)) ** 2
    return float(value)


def default_alpha(h: PauliSum) -> float:
    """Penalty weight guaranteed to clear the spectral range of ``h``.

    Every eigenvalue lies within +-sum|h_r|, so 2*sum|h_r| + 1 shifts any
    penalized state strictly above the top of the spectrum.
    """
    return 2.0 * h.abs_coefficient_sum() + 1.0


def parse_problem(text: str) -> MolecularProblem:
    n_qubits = None
    n_electrons = None
    label = ""
    fci: tuple[float, ...] = ()
    terms: list[PauliTerm] = []
    seen_ops: dict[tuple, int] = {}
    saw_format = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ProblemFormatError(line_no, f"expected 'key: value', got {raw!r}")
        key = key.strip()
        value = value.strip()

        if not saw_format:
            if key != "format":
                raise ProblemFormatError(line_no, "file must start with a format line")
            if value != FORMAT_LINE:
                raise ProblemFormatError(line_no, f"unsupported format {value!r}")
            saw_format = True
            continue

        if key == "label":
            label = value
        elif key == "n_qubits":
            n_qubits = _parse_positive_int(line_no, key, value)
        elif key == "n_electrons":
            n_electrons = _parse_positive_int(line_no, key, value, allow_zero=True)
        elif key == "fci":
            try:
                fci = tuple(float(tok) for tok in value.split())
            except ValueError:
                raise ProblemFormatError(line_no, f"bad fci energies {value!r}") from None
        elif key == "term":
            if n_qubits is None:
                raise ProblemFormatError(line_no, "term before n_qubits")
            terms.append(_parse_term(line_no, value, n_qubits, seen_ops))
        else:
            raise ProblemFormatError(line_no, f"unknown key {key!r}")

    if not saw_format:
        raise ProblemFormatError(1, "empty problem file")
    if n_qubits is None:
        raise ProblemFormatError(1, "missing n_qubits")
    if n_electrons is None:
        raise ProblemFormatError(1, "missing n_electrons")

    ham = PauliSum(terms, n_qubits, prune=0.0)
    try:
        return MolecularProblem(n_qubits, n_electrons, ham, label, fci)
    except ValueError as exc:
        raise ProblemFormatError(1, str(exc)) from None


def _parse_positive_int(line_no, key, value, allow_zero=False):
    try:
        n = int(value)
    except ValueError:
        raise ProblemFormatError(line_no, f"bad {key} {value!r}") from None
    if n < 0 or (n == 0 and not allow_zero):
        raise ProblemFormatError(line_no, f"bad {key} {n}")
    return n


def _parse_term(line_no, value, n_qubits, seen_ops):
    tokens = value.split()
    if not tokens:
        raise ProblemFormatError(line_no, "term line without coefficient")
    try:
        coeff = float(tokens[0])
    except ValueError:
        raise ProblemFormatError(
            line_no, f"non-real coefficient {tokens[0]!r}"
        ) from None
    ops = []
    for tok in tokens[1:]:
        m = _TERM_OP.match(tok)
        if m is None:
            raise ProblemFormatError(line_no, f"bad Pauli factor {tok!r}")
        q = int(m.group(2))
        if q >= n_qubits:
            raise ProblemFormatError(
                line_no, f"qubit index {q} out of range for {n_qubits} qubits"
            )
        ops.append((q, m.group(1)))
    try:
        term = PauliTerm(coeff, tuple(ops), n_qubits)
    except ValueError as exc:
        raise ProblemFormatError(line_no, str(exc)) from None
    if term.ops in seen_ops:
        raise ProblemFormatError(
            line_no, f"duplicate term (first seen on line {seen_ops[term.ops]})"
        )
    seen_ops[term.ops] = line_no
    return term


def serialize_problem(problem: MolecularProblem) -> str:
    lines = [
        f"format: {FORMAT_LINE}",
        f"label: {problem.label}",
        f"n_qubits: {problem.n_qubits}",
        f"n_electrons: {problem.n_electrons}",
    ]
    if problem.fci_energies:
        lines.append("fci: " + " ".join(repr(e) for e in problem.fci_energies))
    for term in problem.hamiltonian.terms:
        body = " ".join(f"{axis}{q}" for q, axis in term.ops)
        coeff = repr(term.coefficient.real)
        lines.append(f"term: {coeff} {body}".rstrip())
    return "\n".join(lines) + "\n"


def load_problem(path) -> MolecularProblem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read())


def save_problem(problem: MolecularProblem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_problem(problem))


def sector_indices(n_qubits: int, weight: int) -> np.ndarray:
    """Ascending basis indices with the given occupation count."""
    basis = np.arange(1 << n_qubits, dtype=np.int64)
    return basis[np.bitwise_count(basis) == weight]


def exact_spectrum(
    problem: MolecularProblem,
    k: int = 1,
    sector: int | None = None,
    return_vectors: bool = False,
):
    """Lowest ``k`` exact eigenvalues of the problem Hamiltonian.

    With ``sector`` set (a Hamming weight, typically n_electrons) the
    diagonalization runs in that particle-number block, which is the FCI
    answer for a number-conserving Hamiltonian.  Eigenvectors come back
    as full-register StateVectors.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = problem.n_qubits
    compiled = compile_observable(problem.hamiltonian)
    if sector is None:
        if n > FULL_DENSE_LIMIT:
            raise CapacityError(
                f"full dense diagonalization capped at {FULL_DENSE_LIMIT} qubits "
                f"(got {n}); pass a particle-number sector"
            )
        idx = np.arange(1 << n, dtype=np.int64)
    else:
        if not 0 <= sector <= n:
            raise ValueError(f"sector weight {sector} outside [0, {n}]")
        if n > SECTOR_DENSE_LIMIT:
            raise CapacityError(
                f"sector diagonalization capped at {SECTOR_DENSE_LIMIT} qubits (got {n})"
            )
        idx = sector_indices(n, sector)
    dim = idx.shape[0]
    if k > dim:
        raise ValueError(f"requested {k} levels from a {dim}-dimensional block")

    block = compiled.sector_matrix(idx)
    if return_vectors:
        vals, vecs = np.linalg.eigh(block)
        states = []
        for col in range(k):
            amps = np.zeros(1 << n, dtype=np.complex128)
            amps[idx] = vecs[:, col]
            states.append(StateVector(amps, n))
        return [float(v) for v in vals[:k]], states
    vals = np.linalg.eigvalsh(block)
    return [float(v) for v in vals[:k]]


def fci_spectrum(problem: MolecularProblem, k: int = 1, return_vectors: bool = False):
    """exact_spectrum restricted to the problem's electron-count sector."""
    return exact_spectrum(
        problem, k, sector=problem.n_electrons, return_vectors=return_vectors
    )


def sector_dimension(n_qubits: int, weight: int) -> int:
    return comb(n_qubits, weight)
