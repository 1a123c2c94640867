"""Release gate: one test per acceptance criterion.

Each criterion pins its tolerance and wall-clock budget next to the
assertions.  Criteria 1-6 run on every invocation; 7-10 need the
molecular problem files under tests/fixtures/molecules and carry the
slow or extended marker (see README for the tier split).
"""

import time

import numpy as np
import pytest

from adapt_xstate.adapt import (
    ENERGY,
    GRADIENT,
    AdaptConfig,
    excited_ladder,
    run_adapt,
    write_trace_csv,
)
from adapt_xstate.elements import FERMIONIC, QUBIT, canonical_double, canonical_single
from adapt_xstate.observables import PenaltyEvaluator
from adapt_xstate.optimize import ansatz_energy_and_gradient, build_ansatz_state
from adapt_xstate.paulis import LadderOp, ladder_to_pauli
from adapt_xstate.pool import pool_size, qubit_pool, uccsd_elements
from adapt_xstate.problems import (
    default_alpha,
    exact_spectrum,
    load_problem,
)
from adapt_xstate.state import StateVector, compile_observable

import oracles
from helpers import FIXTURE_DIR, make_sum, random_gradient_instance

MOLECULE_DIR = FIXTURE_DIR / "molecules"

TOL_ALGEBRA = 1e-12          # operator identities, dense
TOL_EVOLUTION = 1e-10        # state evolution vs matrix exponential
FD_STEP = 1e-5               # central-difference step
TOL_GRADIENT = 1e-6          # relative, floored at 1 in absolute terms
TOL_PENALTY = 1e-10          # shifted minimum vs next exact level
TOL_FCI = 1e-6               # adaptive runs vs sector diagonalization, Ha
CHEMICAL_ACCURACY = 1.6e-3   # Ha
TOL_LEVELS = 5e-4            # tabulated molecular levels, Ha
DEGENERACY_GAP = 1e-6        # levels closer than this count as one


def molecule(name):
    path = MOLECULE_DIR / name
    if not path.exists():
        pytest.fail(
            f"missing {path}; generate it with the chem-gen package "
            "(see tools/make_molecule_fixtures.py)"
        )
    return load_problem(path)


def test_criterion_1_operator_algebra_and_evolutions():
    """Ladder-operator identities to 1e-12; evolutions vs expm to 1e-10."""
    t0 = time.perf_counter()
    for n in (2, 3, 4):
        eye = np.eye(1 << n)
        f = [ladder_to_pauli(LadderOp(i, False, FERMIONIC), n).to_matrix()
             for i in range(n)]
        fd = [ladder_to_pauli(LadderOp(i, True, FERMIONIC), n).to_matrix()
              for i in range(n)]
        q = [ladder_to_pauli(LadderOp(i, False, QUBIT), n).to_matrix()
             for i in range(n)]
        qd = [ladder_to_pauli(LadderOp(i, True, QUBIT), n).to_matrix()
              for i in range(n)]

        def anti(a, b):
            return a @ b + b @ a

        def comm(a, b):
            return a @ b - b @ a

        for i in range(n):
            for j in range(n):
                expect = eye if i == j else 0.0
                assert np.max(np.abs(anti(f[i], fd[j]) - expect)) < TOL_ALGEBRA
                assert np.max(np.abs(anti(f[i], f[j]))) < TOL_ALGEBRA
                assert np.max(np.abs(anti(fd[i], fd[j]))) < TOL_ALGEBRA
                if i == j:
                    assert np.max(np.abs(anti(q[i], qd[i]) - eye)) < TOL_ALGEBRA
                else:
                    assert np.max(np.abs(comm(q[i], qd[j]))) < TOL_ALGEBRA
                assert np.max(np.abs(comm(q[i], q[j]))) < TOL_ALGEBRA
                assert np.max(np.abs(comm(qd[i], qd[j]))) < TOL_ALGEBRA

    rng = np.random.default_rng(11)
    singles = [(4, (0, 1)), (4, (0, 3)), (4, (2, 3)), (5, (1, 4))]
    doubles = [
        (4, ((0, 1), (2, 3))), (4, ((0, 2), (1, 3))), (4, ((0, 3), (1, 2))),
        (5, ((0, 4), (1, 3))), (6, ((1, 2), (4, 5))),
    ]
    for flavor in (QUBIT, FERMIONIC):
        fermionic = flavor == FERMIONIC
        for n, (i, k) in singles:
            el = canonical_single(flavor, i, k)
            theta = float(rng.uniform(-2.5, 2.5))
            psi = StateVector(oracles.random_state(n, rng))
            gen = oracles.single_generator(n, *el.indices, fermionic=fermionic)
            want = oracles.expm_skew(gen, theta) @ psi.amplitudes
            got = psi.apply_excitation(el, theta).amplitudes
            assert np.max(np.abs(got - want)) < TOL_EVOLUTION
        for n, (pa, pb) in doubles:
            el = canonical_double(flavor, pa, pb)
            theta = float(rng.uniform(-2.5, 2.5))
            psi = StateVector(oracles.random_state(n, rng))
            gen = oracles.double_generator(n, *el.indices, fermionic=fermionic)
            want = oracles.expm_skew(gen, theta) @ psi.amplitudes
            got = psi.apply_excitation(el, theta).amplitudes
            assert np.max(np.abs(got - want)) < TOL_EVOLUTION

    assert time.perf_counter() - t0 < 10.0


def test_criterion_2_gradients_match_finite_differences():
    """50 random penalized instances, adjoint vs central differences."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(29)
    for _ in range(50):
        evaluator, reference, elements, theta = random_gradient_instance(rng)
        energy, grad = ansatz_energy_and_gradient(
            evaluator, reference, elements, theta
        )
        direct = evaluator.energy(
            build_ansatz_state(reference, elements, theta).amplitudes
        )
        assert energy == pytest.approx(direct, abs=1e-11)
        for p in range(len(theta)):
            tp = theta.copy()
            tm = theta.copy()
            tp[p] += FD_STEP
            tm[p] -= FD_STEP
            ep = evaluator.energy(
                build_ansatz_state(reference, elements, tp).amplitudes
            )
            em = evaluator.energy(
                build_ansatz_state(reference, elements, tm).amplitudes
            )
            fd = (ep - em) / (2.0 * FD_STEP)
            assert abs(grad[p] - fd) <= TOL_GRADIENT * max(1.0, abs(fd))
    assert time.perf_counter() - t0 < 60.0


def test_criterion_3_overlap_penalties_shift_found_levels():
    """Penalizing the r lowest exact states raises the floor to level r."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(37)
    for _ in range(6):
        n = int(rng.integers(3, 7))
        ham = make_sum(oracles.random_hermitian_terms(n, 8, rng), n)
        dense = ham.to_matrix()
        vals, vecs = np.linalg.eigh(dense)
        alpha = default_alpha(ham)
        base = compile_observable(ham)
        dim = 1 << n
        for r in (1, 2):
            ev = PenaltyEvaluator(
                base,
                [(alpha, vecs[:, c].astype(np.complex128)) for c in range(r)],
            )
            shifted = np.column_stack([
                ev.apply(np.eye(dim, dtype=np.complex128)[:, c])
                for c in range(dim)
            ])
            got = float(np.linalg.eigvalsh(shifted)[0])
            assert abs(got - vals[r]) < TOL_PENALTY
    assert time.perf_counter() - t0 < 30.0


def test_criterion_4_adaptive_runs_reach_sector_diagonalization(tmp_path):
    """Ground and first excited state on every committed synthetic fixture,
    both screening strategies, both pool flavors, to 1e-6 Ha."""
    t0 = time.perf_counter()
    names = ["synthetic_4q.prob", "synthetic_6q.prob", "synthetic_8q.prob"]
    for name in names:
        problem = load_problem(FIXTURE_DIR / name)
        for strategy in (ENERGY, GRADIENT):
            for flavor in (QUBIT, FERMIONIC):
                config = AdaptConfig(
                    epsilon=1e-8, strategy=strategy, pool_flavor=flavor
                )
                out = tmp_path / f"{name}-{strategy}-{flavor}"
                stages = excited_ladder(problem, config, 1, str(out))
                assert len(stages) == 2, (name, strategy, flavor)
                for k, stage in enumerate(stages):
                    assert stage.trace.converged, (name, strategy, flavor, k)
                    err = abs(stage.energy - problem.fci_energies[k])
                    assert err < TOL_FCI, (name, strategy, flavor, k, err)
    assert time.perf_counter() - t0 < 300.0


def test_criterion_5_thread_count_never_changes_results(tmp_path):
    """Screening with 8 workers reproduces the serial run bit for bit."""
    problem = load_problem(FIXTURE_DIR / "synthetic_6q.prob")
    traces = []
    for threads in (1, 8):
        config = AdaptConfig(epsilon=1e-8, threads=threads)
        traces.append(run_adapt(problem, config=config))
    a, b = traces
    assert [r.element for r in a.records] == [r.element for r in b.records]
    assert a.theta == b.theta
    assert [r.energy for r in a.records] == [r.energy for r in b.records]
    assert [r.screen_evals for r in a.records] == [r.screen_evals for r in b.records]
    for trace, name in ((a, "serial.csv"), (b, "threaded.csv")):
        write_trace_csv(trace, tmp_path / name, "determinism check")
    assert (tmp_path / "serial.csv").read_bytes() == (
        tmp_path / "threaded.csv"
    ).read_bytes()


def test_criterion_6_pool_sizes():
    """Closed-form pool sizes vs construction; pinned reference counts."""
    for n in range(4, 15):
        assert pool_size(n) == len(qubit_pool(n))
    assert pool_size(4) == 9
    assert pool_size(12) == 1551
    assert pool_size(14) == 3094
    assert len(uccsd_elements(12, 4)) == 200
    assert len(uccsd_elements(14, 6)) == 468


@pytest.fixture(scope="module")
def lih_energy_ladder(tmp_path_factory):
    """Ground plus first excited state of LiH, shared by criteria 7 and 9."""
    problem = molecule("lih_1.546.prob")
    config = AdaptConfig(epsilon=1e-8, threads=8, trig_screening=True)
    out = tmp_path_factory.mktemp("lih_ladder")
    return problem, excited_ladder(problem, config, 1, str(out))


def _iterations_to_accuracy(trace, target):
    """First iteration whose energy is within chemical accuracy of target.

    Trace energies are penalized values, which never undershoot the
    target level, so the signed difference is the right test."""
    for rec in trace.records:
        if rec.energy - target < CHEMICAL_ACCURACY:
            return rec.iteration
    return None


@pytest.mark.slow
def test_criterion_7_lih_ground_and_first_excited(lih_energy_ladder):
    """LiH at its equilibrium bond length: two states to chemical accuracy,
    and a compact excited-state ansatz with a bounded two-qubit-gate count.

    The size and gate bounds apply to the excited state; the ground stage
    only feeds the penalty and may ride its tail of ~1e-8 reductions for
    as long as the threshold allows."""
    problem, stages = lih_energy_ladder
    assert len(stages) == 2
    for k, stage in enumerate(stages):
        assert stage.trace.converged, k
        err = abs(stage.energy - problem.fci_energies[k])
        assert err < CHEMICAL_ACCURACY, (k, err)
    excited = stages[1].trace
    assert len(excited.elements) <= 30
    assert excited.records[-1].cnot_count <= 350


def _group_levels(values):
    groups = [[values[0]]]
    for v in values[1:]:
        if v - groups[-1][-1] < DEGENERACY_GAP:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def test_criterion_8_beh2_stretched_spectra():
    """The nine lowest excited BeH2 levels at 1.5 and 1.75 A: values to
    5e-4 Ha and exact multiplicity patterns within that window."""
    t0 = time.perf_counter()
    expected = {
        "beh2_1.500.prob": [(-15.3343, 2), (-15.3331, 6), (-15.3026, 1)],
        "beh2_1.750.prob": [(-15.3131, 2), (-15.3059, 3), (-15.3056, 4)],
    }
    for name, levels in expected.items():
        problem = molecule(name)
        values = exact_spectrum(problem, k=10, sector=problem.n_electrons)
        groups = _group_levels(values[1:])  # the table excludes the ground state
        assert [len(g) for g in groups] == [d for _, d in levels], (name, groups)
        for (energy, _), group in zip(levels, groups):
            assert abs(group[0] - energy) < TOL_LEVELS, (name, energy, group[0])
    assert time.perf_counter() - t0 < 120.0


@pytest.mark.slow
def test_criterion_9_energy_screening_beats_gradient_on_lih(lih_energy_ladder):
    """Building the first excited state of LiH, gradient screening needs
    more than twice the iterations of energy screening to reach chemical
    accuracy: zero-angle scores say little when the reference barely
    overlaps the target."""
    problem, stages = lih_energy_ladder
    assert stages[1].trace.converged
    target = problem.fci_energies[1]
    e_iters = _iterations_to_accuracy(stages[1].trace, target)
    assert e_iters is not None

    # same penalty state for both strategies isolates the screening rule
    ground = StateVector.load(stages[0].state_path)
    alpha = default_alpha(problem.hamiltonian)
    gradient_trace = run_adapt(
        problem,
        penalties=[(alpha, ground)],
        config=AdaptConfig(
            epsilon=1e-8, threads=8, trig_screening=True,
            strategy=GRADIENT, max_iterations=2 * e_iters, target_state=1,
        ),
    )
    assert _iterations_to_accuracy(gradient_trace, target) is None, e_iters


@pytest.mark.extended
def test_criterion_9b_gradient_screening_stalls_on_beh2(tmp_path):
    """On BeH2 at equilibrium the gradient screen never brings the first
    excited state to chemical accuracy in 80 iterations; energy screening
    does."""
    problem = molecule("beh2_1.316.prob")
    config = AdaptConfig(epsilon=1e-8, threads=8, trig_screening=True)
    stages = excited_ladder(problem, config, 1, str(tmp_path))
    assert len(stages) == 2
    target = problem.fci_energies[1]
    assert _iterations_to_accuracy(stages[1].trace, target) is not None

    ground = StateVector.load(stages[0].state_path)
    alpha = default_alpha(problem.hamiltonian)
    gradient_trace = run_adapt(
        problem,
        penalties=[(alpha, ground)],
        config=AdaptConfig(
            epsilon=1e-8, threads=8, trig_screening=True,
            strategy=GRADIENT, max_iterations=80, target_state=1,
        ),
    )
    assert _iterations_to_accuracy(gradient_trace, target) is None


@pytest.mark.extended
def test_criterion_10_penalty_ladder_skips_zero_overlap_state(tmp_path):
    """BeH2 at 1.5 A: the first penalized stage lands on the second excited
    level because the reference never overlaps the first."""
    problem = molecule("beh2_1.500.prob")
    config = AdaptConfig(epsilon=1e-8, threads=8, trig_screening=True)
    stages = excited_ladder(problem, config, 1, str(tmp_path))
    assert len(stages) == 2
    values = exact_spectrum(problem, k=4, sector=problem.n_electrons)
    # distinct levels, not raw eigenvalues: the first excited one is degenerate
    groups = _group_levels(values[1:])
    e_first, e_second = groups[0][0], groups[1][0]
    assert abs(stages[1].energy - e_second) < TOL_FCI
    assert abs(stages[1].energy - e_first) > 1e-4
