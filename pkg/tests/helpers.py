"""Shared builders for the solver test suite.

Kept out of conftest so test modules can import them by module name; the
conftest re-exports nothing.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "tools"))

from adapt_xstate.paulis import PauliSum, PauliTerm
from adapt_xstate.problems import MolecularProblem

import oracles
from make_synthetic_fixtures import molecular_toy  # noqa: F401  (re-exported)

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def make_sum(term_specs, n_qubits) -> PauliSum:
    terms = [
        PauliTerm(ops=ops, coefficient=complex(c), n_qubits=n_qubits)
        for c, ops in term_specs
    ]
    return PauliSum(terms, n_qubits=n_qubits)


def make_toy_problem(n_qubits, n_electrons, seed=7, label="toy") -> MolecularProblem:
    local = np.random.default_rng(seed)
    ham = make_sum(oracles.hopping_terms(n_qubits, local), n_qubits)
    return MolecularProblem(
        n_qubits=n_qubits, n_electrons=n_electrons, hamiltonian=ham, label=label
    )


def random_elements(n_qubits, count, rng, flavors=("qubit", "fermionic")):
    from adapt_xstate.elements import canonical_double, canonical_single

    out = []
    for _ in range(count):
        flavor = flavors[int(rng.integers(len(flavors)))]
        if n_qubits < 4 or rng.random() < 0.5:
            i, k = sorted(int(q) for q in rng.choice(n_qubits, size=2, replace=False))
            out.append(canonical_single(flavor, i, k))
        else:
            a, b, c, d = sorted(int(q) for q in rng.choice(n_qubits, size=4, replace=False))
            pairings = [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]
            pa, pb = pairings[int(rng.integers(3))]
            out.append(canonical_double(flavor, pa, pb))
    return out


def random_gradient_instance(rng, max_qubits=6, with_penalties=True):
    """Random penalized ansatz-energy setup for derivative checks."""
    from adapt_xstate.observables import PenaltyEvaluator
    from adapt_xstate.state import StateVector, compile_observable

    n = int(rng.integers(3, max_qubits + 1))
    ham = make_sum(oracles.random_hermitian_terms(n, 8, rng), n)
    penalties = []
    if with_penalties and rng.random() < 0.7:
        for _ in range(int(rng.integers(1, 3))):
            penalties.append(
                (float(rng.uniform(0.5, 4.0)), oracles.random_state(n, rng))
            )
    evaluator = PenaltyEvaluator(compile_observable(ham), penalties)
    m = int(rng.integers(1, 6))
    elements = random_elements(n, m, rng)
    theta = rng.uniform(-1.0, 1.0, size=m)
    reference = StateVector(oracles.random_state(n, rng))
    return evaluator, reference, elements, theta
