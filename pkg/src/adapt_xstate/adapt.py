"""Adaptive ansatz construction and the excited-state ladder.

One outer iteration: rebuild the current state, score every pool element
against a frozen snapshot of it, fully reoptimize the top n candidates
appended one at a time, then adopt the candidate with the largest energy
reduction.  The reduction from the full reoptimization (not the screening
score) drives both selection and the termination test.

Excited states reuse the same loop on a penalized objective: each solved
state enters as an overlap penalty that shifts it out of the low end of
the spectrum, so the next ground-state search lands one level up.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .costs import CnotCostModel, default_cost_model
from .elements import FERMIONIC, QUBIT, ExcitationElement
from .observables import PenaltyEvaluator
from .optimize import (
    Objective,
    OptimResult,
    _apply_element,
    _apply_generator,
    minimize_ansatz,
    nelder_mead,
)
from .pool import fermionic_pool, qubit_pool
from .problems import MolecularProblem, default_alpha
from .state import NumericalHealthError, StateVector, compile_observable, prepare_reference

ENERGY = "energy"
GRADIENT = "gradient"

SCREEN_TOL_F = 1e-9
SCREEN_TOL_X = 1e-6
SCREEN_MAX_EVALS = 100
SCREEN_STEP = 0.1

TRACE_COLUMNS = [
    "iteration", "flavor", "order", "i", "j", "k", "l",
    "delta_e", "energy", "error_vs_fci", "n_params",
    "cnot_count", "screen_evals", "vqe_evals",
]


class AdaptConfigError(ValueError):
    pass


@dataclass
class AdaptConfig:
    """Knobs of the adaptive loop; defaults follow the benchmark setup."""

    epsilon: float = 1e-8
    n_candidates: int = 10
    max_iterations: int = 100
    pool_flavor: str = QUBIT
    strategy: str = ENERGY
    target_state: int = 0
    alpha: float | tuple[float, ...] | None = None
    threads: int = 1
    trig_screening: bool = False
    switch_to_gradient_at: int | None = None
    bfgs_gtol: float = 1e-9
    bfgs_max_iters: int = 500

    def __post_init__(self):
        if self.epsilon <= 0:
            raise AdaptConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.n_candidates < 1:
            raise AdaptConfigError(
                f"n_candidates must be >= 1, got {self.n_candidates}"
            )
        if self.pool_flavor not in (QUBIT, FERMIONIC):
            raise AdaptConfigError(f"unknown pool flavor {self.pool_flavor!r}")
        if self.strategy not in (ENERGY, GRADIENT):
            raise AdaptConfigError(f"unknown strategy {self.strategy!r}")
        if self.target_state < 0:
            raise AdaptConfigError("target_state must be >= 0")
        if self.threads < 1:
            raise AdaptConfigError("threads must be >= 1")


@dataclass
class IterationRecord:
    iteration: int
    element: ExcitationElement
    delta_e: float
    energy: float
    error_vs_fci: float | None
    n_params: int
    cnot_count: int | None
    screen_evals: int
    vqe_evals: int
    theta: tuple[float, ...]
    inner_converged: bool = True


@dataclass
class AdaptTrace:
    converged: bool
    termination: str
    initial_energy: float
    final_energy: float
    final_base_energy: float
    elements: list[ExcitationElement] = field(default_factory=list)
    theta: tuple[float, ...] = ()
    records: list[IterationRecord] = field(default_factory=list)
    fci_reference: float | None = None
    label: str = ""

    @property
    def n_iterations(self) -> int:
        return len(self.records)

    @property
    def final_error(self) -> float | None:
        if self.fci_reference is None:
            return None
        return self.final_energy - self.fci_reference


@dataclass
class _Screened:
    index: int
    element: ExcitationElement
    score: float
    warm_theta: float
    evaluations: int


def default_pool(n_qubits: int, flavor: str) -> list[ExcitationElement]:
    return qubit_pool(n_qubits) if flavor == QUBIT else fermionic_pool(n_qubits)


def _run_ordered(jobs, worker, threads: int):
    """Map worker over jobs, in order, optionally on a thread pool."""
    if threads <= 1 or len(jobs) <= 1:
        return [worker(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, jobs))


def screen_pool_energy_reduction(
    evaluator: PenaltyEvaluator,
    snapshot: np.ndarray,
    n_qubits: int,
    pool: list[ExcitationElement],
    e_prev: float,
    threads: int = 1,
    trig: bool = False,
) -> list[_Screened]:
    """Single-parameter minimization for every pool element.

    Each element sees the same frozen snapshot; the score is the signed
    energy reduction achieved by its best single angle.
    """
    if trig:
        design = _trig_design()

    def screen(job):
        index, element = job
        if trig:
            value, theta, evals = _trig_minimize(
                evaluator, snapshot, n_qubits, element, design
            )
        else:
            def f(x):
                amps = snapshot.copy()
                _apply_element(amps, n_qubits, element, float(x[0]))
                return evaluator.energy(amps)

            res = nelder_mead(
                Objective(f, 1),
                [0.0],
                tol_f=SCREEN_TOL_F,
                tol_x=SCREEN_TOL_X,
                max_evals=SCREEN_MAX_EVALS,
                initial_step=SCREEN_STEP,
            )
            value, theta, evals = res.value, float(res.parameters[0]), res.evaluations
        return _Screened(index, element, e_prev - value, theta, evals)

    return _run_ordered(list(enumerate(pool)), screen, threads)


def screen_pool_gradient(
    evaluator: PenaltyEvaluator,
    snapshot: np.ndarray,
    n_qubits: int,
    pool: list[ExcitationElement],
    threads: int = 1,
) -> list[_Screened]:
    """Gradient-magnitude scores |dE/dtheta| at theta=0 for every element.

    One application of the penalized Hamiltonian is shared by the whole
    pool; each element then costs a single generator application.
    """
    phi = evaluator.apply(snapshot)

    def screen(job):
        index, element = job
        scratch = np.empty_like(snapshot)
        _apply_generator(scratch, snapshot, n_qubits, element)
        score = abs(2.0 * float(np.vdot(phi, scratch).real))
        return _Screened(index, element, score, 0.0, 1)

    return _run_ordered(list(enumerate(pool)), screen, threads)


_TRIG_ANGLES = tuple(2.0 * np.pi * j / 5.0 for j in range(5))


def _trig_design() -> np.ndarray:
    rows = [
        [1.0, np.sin(t), np.cos(t), np.sin(2 * t), np.cos(2 * t)]
        for t in _TRIG_ANGLES
    ]
    return np.array(rows, dtype=float)


def _trig_minimize(evaluator, snapshot, n_qubits, element, design):
    """Closed-form single-angle minimum.

    The generator satisfies T^3 = -T, so E(theta) is exactly
    a + b sin + c cos + d sin2 + e cos2; five evaluations pin the
    coefficients and the stationary angles are roots of a quartic in
    z = exp(i theta).
    """
    samples = np.empty(5)
    for idx, t in enumerate(_TRIG_ANGLES):
        amps = snapshot.copy()
        _apply_element(amps, n_qubits, element, t)
        samples[idx] = evaluator.energy(amps)
    a, b, c, d, e = np.linalg.solve(design, samples)

    def value(theta):
        return (
            a + b * np.sin(theta) + c * np.cos(theta)
            + d * np.sin(2 * theta) + e * np.cos(2 * theta)
        )

    # E'(theta)=0  <=>  (d+ie) z^4 + (b+ic)/2 z^3 + (b-ic)/2 z + (d-ie) = 0
    coeffs = np.array(
        [d + 1j * e, (b + 1j * c) / 2.0, 0.0, (b - 1j * c) / 2.0, d - 1j * e]
    )
    candidates = [0.0]
    if np.max(np.abs(coeffs)) > 1e-15:
        for root in np.roots(coeffs):
            if abs(abs(root) - 1.0) < 1e-6:
                candidates.append(float(np.angle(root)))
    best_theta = min(candidates, key=value)
    return float(value(best_theta)), float(best_theta), 5


def _rank_candidates(scored: list[_Screened], n: int) -> list[_Screened]:
    ordered = sorted(scored, key=lambda s: (-s.score, s.index))
    return ordered[:n]


def run_adapt(
    problem: MolecularProblem,
    penalties: list[tuple[float, StateVector]] | None = None,
    config: AdaptConfig | None = None,
    pool: list[ExcitationElement] | None = None,
    cost_model: CnotCostModel | None = None,
) -> AdaptTrace:
    """Grow an ansatz for the (penalized) ground state until converged.

    ``penalties`` lists (alpha, state) pairs for already-solved lower
    states; an empty list targets the plain ground state.
    """
    config = config or AdaptConfig()
    penalties = penalties or []
    pool = pool if pool is not None else default_pool(problem.n_qubits, config.pool_flavor)
    if not pool:
        raise AdaptConfigError("empty element pool")
    cost_model = cost_model or default_cost_model()

    evaluator = PenaltyEvaluator(
        compile_observable(problem.hamiltonian),
        [(alpha, vec.amplitudes) for alpha, vec in penalties],
    )
    reference = prepare_reference(problem.n_qubits, problem.n_electrons)
    fci_ref = None
    if config.target_state < len(problem.fci_energies):
        fci_ref = problem.fci_energies[config.target_state]

    elements: list[ExcitationElement] = []
    theta = np.zeros(0)
    e_prev = evaluator.energy(reference.amplitudes)
    initial_energy = e_prev
    records: list[IterationRecord] = []
    converged = False
    termination = "max_iterations"
    n_candidates = min(config.n_candidates, len(pool))

    for m in range(1, config.max_iterations + 1):
        snapshot = _build_amps(reference, elements, theta)

        strategy = config.strategy
        if (
            config.switch_to_gradient_at is not None
            and m >= config.switch_to_gradient_at
        ):
            strategy = GRADIENT

        if strategy == ENERGY:
            scored = screen_pool_energy_reduction(
                evaluator, snapshot, problem.n_qubits, pool, e_prev,
                threads=config.threads, trig=config.trig_screening,
            )
        else:
            scored = screen_pool_gradient(
                evaluator, snapshot, problem.n_qubits, pool,
                threads=config.threads,
            )
        screen_evals = sum(s.evaluations for s in scored)
        candidates = _rank_candidates(scored, n_candidates)

        def refine(cand: _Screened):
            trial_elements = elements + [cand.element]
            start = np.append(theta, cand.warm_theta)
            result, shared = minimize_ansatz(
                evaluator, reference, trial_elements, start,
                gtol=config.bfgs_gtol, max_iters=config.bfgs_max_iters,
            )
            return result, shared.sweeps

        refined = _run_ordered(candidates, refine, config.threads)
        vqe_evals = sum(sweeps for _, sweeps in refined)

        best_idx = None
        best_result = None
        best_delta = -np.inf
        for cand, (result, _) in zip(candidates, refined):
            delta = e_prev - result.value
            if delta > best_delta or (
                delta == best_delta and best_idx is not None and cand.index < best_idx
            ):
                best_idx, best_result, best_delta = cand.index, result, delta
        chosen = pool[best_idx]

        if best_delta < config.epsilon:
            # roundoff-negative reductions at an exact optimum still count
            # as convergence; only a materially negative best is a failure
            slack = 1e-12 * max(1.0, abs(e_prev))
            converged = best_delta > -slack
            termination = "epsilon" if converged else "no_improvement"
            break

        theta = np.asarray(best_result.parameters, dtype=float)
        elements.append(chosen)
        e_now = best_result.value
        if e_now > e_prev + 1e-10:
            raise NumericalHealthError(
                f"energy rose from {e_prev!r} to {e_now!r} at iteration {m}"
            )
        records.append(
            IterationRecord(
                iteration=m,
                element=chosen,
                delta_e=best_delta,
                energy=e_now,
                error_vs_fci=None if fci_ref is None else e_now - fci_ref,
                n_params=len(elements),
                cnot_count=cost_model.try_ansatz_count(elements),
                screen_evals=screen_evals,
                vqe_evals=vqe_evals,
                theta=tuple(theta),
                inner_converged=best_result.converged,
            )
        )
        e_prev = e_now

    final_amps = _build_amps(reference, elements, theta)
    final_base = float(
        compile_observable(problem.hamiltonian).expectation(final_amps).real
    )
    return AdaptTrace(
        converged=converged,
        termination=termination,
        initial_energy=initial_energy,
        final_energy=e_prev,
        final_base_energy=final_base,
        elements=elements,
        theta=tuple(float(t) for t in theta),
        records=records,
        fci_reference=fci_ref,
        label=problem.label,
    )


def _build_amps(reference: StateVector, elements, theta) -> np.ndarray:
    amps = reference.amplitudes.copy()
    for element, t in zip(elements, theta):
        _apply_element(amps, reference.n_qubits, element, float(t))
    return amps


def run_fixed_ansatz(
    problem: MolecularProblem,
    penalties: list[tuple[float, StateVector]] | None,
    elements: list[ExcitationElement],
    start=None,
    gtol: float = 1e-9,
    max_iters: int = 2000,
) -> OptimResult:
    """One full optimization of a preset element list (UCCSD style)."""
    if not elements:
        raise AdaptConfigError("fixed ansatz needs at least one element")
    penalties = penalties or []
    evaluator = PenaltyEvaluator(
        compile_observable(problem.hamiltonian),
        [(alpha, vec.amplitudes) for alpha, vec in penalties],
    )
    reference = prepare_reference(problem.n_qubits, problem.n_electrons)
    if start is None:
        start = np.zeros(len(elements))
    result, _ = minimize_ansatz(
        evaluator, reference, elements, start, gtol=gtol, max_iters=max_iters
    )
    return result


@dataclass
class LadderStage:
    k: int
    energy: float
    state_path: str
    trace: AdaptTrace


def excited_ladder(
    problem: MolecularProblem,
    config: AdaptConfig,
    up_to_k: int,
    output_dir: str,
    pool: list[ExcitationElement] | None = None,
    cost_model: CnotCostModel | None = None,
) -> list[LadderStage]:
    """Solve states 0..up_to_k, penalizing each previously found state.

    Every converged state is written to ``output_dir`` as a QSV1 file and
    fed into the next stage's penalty list.  A non-convergent stage stops
    the ladder and the partial results are returned.
    """
    if up_to_k < 0:
        raise AdaptConfigError("up_to_k must be >= 0")
    os.makedirs(output_dir, exist_ok=True)
    found: list[StateVector] = []
    stages: list[LadderStage] = []
    for k in range(up_to_k + 1):
        penalties = [
            (_alpha_for(problem, config, r), state) for r, state in enumerate(found)
        ]
        stage_config = replace(config, target_state=k)
        trace = run_adapt(
            problem, penalties, stage_config, pool=pool, cost_model=cost_model
        )
        reference = prepare_reference(problem.n_qubits, problem.n_electrons)
        state = StateVector(
            _build_amps(reference, trace.elements, np.asarray(trace.theta))
        )
        path = os.path.join(output_dir, f"state_{k}.qsv")
        state.save(path)
        stages.append(LadderStage(k, trace.final_base_energy, path, trace))
        if not trace.converged:
            break
        found.append(state)
    return stages


def _alpha_for(problem: MolecularProblem, config: AdaptConfig, r: int) -> float:
    if config.alpha is None:
        return default_alpha(problem.hamiltonian)
    if isinstance(config.alpha, (int, float)):
        return float(config.alpha)
    seq = list(config.alpha)
    return float(seq[r]) if r < len(seq) else float(seq[-1])


def write_trace_csv(trace: AdaptTrace, path, stamp: str) -> None:
    """Trace rows plus a leading comment line recording the run config."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {stamp}\n")
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec in trace.records:
            el = rec.element
            if el.order == "single":
                i, k = el.indices
                j = l = ""
            else:
                i, j, k, l = el.indices
            writer.writerow([
                rec.iteration, el.flavor, el.order, i, j, k, l,
                repr(rec.delta_e), repr(rec.energy),
                "" if rec.error_vs_fci is None else repr(rec.error_vs_fci),
                rec.n_params,
                "" if rec.cnot_count is None else rec.cnot_count,
                rec.screen_evals, rec.vqe_evals,
            ])
