"""Classical minimizers and the analytic ansatz gradient.

Both optimizers are deterministic (no randomized restarts) so adaptive
runs are bit-reproducible.  The ansatz gradient uses the adjoint method:
one forward build, one application of the penalized Hamiltonian, then a
single backward unwind yields every component, instead of one rebuild
per parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .observables import PenaltyEvaluator
from .state import NORM_TOLERANCE, NumericalHealthError, StateVector

BFGS_GTOL = 1e-9

ARMIJO_C1 = 1e-4
BACKTRACK_FACTOR = 0.5
MAX_BACKTRACKS = 45

# an accepted step this heavily backtracked making ulp-level progress
# counts as a stall; three in a row end the search
STALL_FTOL = 1e-14
STALL_STEP = 1e-3
STALL_LIMIT = 3


class Objective:
    """Counted wrapper around an energy function of a parameter vector."""

    __slots__ = ("fn", "dimension", "evaluations")

    def __init__(self, fn, dimension: int):
        if dimension < 1:
            raise ValueError(f"objective dimension must be >= 1, got {dimension}")
        self.fn = fn
        self.dimension = dimension
        self.evaluations = 0

    def __call__(self, x: np.ndarray) -> float:
        self.evaluations += 1
        return float(self.fn(x))


@dataclass
class OptimResult:
    parameters: np.ndarray
    value: float
    evaluations: int
    converged: bool
    iterations: int = 0
    message: str = ""


def nelder_mead(
    obj: Objective,
    start,
    tol_f: float = 1e-9,
    tol_x: float = 1e-6,
    max_evals: int = 1000,
    initial_step: float = 0.1,
) -> OptimResult:
    """Reflection/expansion/contraction/shrink simplex search.

    Converges when both the value spread and the coordinate spread of the
    simplex drop below the tolerances; otherwise runs out of evaluations
    and reports the best point seen with converged=False.
    """
    x0 = np.atleast_1d(np.asarray(start, dtype=float))
    dim = x0.shape[0]
    if dim != obj.dimension:
        raise ValueError(f"start has dimension {dim}, objective wants {obj.dimension}")

    simplex = [x0]
    for d in range(dim):
        v = x0.copy()
        v[d] += initial_step
        simplex.append(v)
    values = []
    best_x, best_f = None, np.inf

    def evaluate(x):
        nonlocal best_x, best_f
        f = obj(x)
        if f < best_f:
            best_f, best_x = f, x.copy()
        return f

    values = [evaluate(v) for v in simplex]

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    converged = False
    iterations = 0
    while obj.evaluations < max_evals:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        f_spread = values[-1] - values[0]
        x_spread = max(
            float(np.max(np.abs(v - simplex[0]))) for v in simplex[1:]
        )
        if f_spread < tol_f and x_spread < tol_x:
            converged = True
            break
        iterations += 1

        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + alpha * (centroid - simplex[-1])
        fr = evaluate(xr)
        if fr < values[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = evaluate(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + rho * (xr - centroid)
            else:
                xc = centroid + rho * (simplex[-1] - centroid)
            fc = evaluate(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                for i in range(1, len(simplex)):
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                    values[i] = evaluate(simplex[i])

    return OptimResult(
        parameters=best_x,
        value=best_f,
        evaluations=obj.evaluations,
        converged=converged,
        iterations=iterations,
    )


def bfgs(
    obj: Objective,
    grad,
    start,
    gtol: float = BFGS_GTOL,
    max_iters: int = 200,
) -> OptimResult:
    """Quasi-Newton minimization with Armijo backtracking line search.

    ``grad(x)`` returns the gradient vector.  Stops when the max-norm of
    the gradient falls below ``gtol``; a collapsed line search returns the
    best point so far with converged=False.
    """
    x = np.atleast_1d(np.asarray(start, dtype=float)).copy()
    dim = x.shape[0]
    if dim != obj.dimension:
        raise ValueError(f"start has dimension {dim}, objective wants {obj.dimension}")

    f = obj(x)
    g = np.asarray(grad(x), dtype=float)
    hinv = np.eye(dim)
    best_x, best_f = x.copy(), f
    converged = False
    message = ""
    iteration = 0
    stalls = 0

    for iteration in range(1, max_iters + 1):
        gmax = float(np.max(np.abs(g)))
        if gmax < gtol:
            converged = True
            break

        direction = -hinv @ g
        slope = float(g @ direction)
        if slope >= 0.0:
            # stale curvature turned the step uphill; fall back to descent
            hinv = np.eye(dim)
            direction = -g
            slope = float(g @ direction)

        step = 1.0
        f_new = None
        for _ in range(MAX_BACKTRACKS):
            candidate = x + step * direction
            f_try = obj(candidate)
            if f_try <= f + ARMIJO_C1 * step * slope:
                f_new = f_try
                break
            step *= BACKTRACK_FACTOR
        if f_new is None:
            message = "line search collapsed"
            break
        displacement = step * float(np.max(np.abs(direction)))
        if displacement < STALL_STEP and f - f_new <= STALL_FTOL * max(1.0, abs(f)):
            stalls += 1
            if stalls >= STALL_LIMIT:
                if f_new < best_f:
                    best_f, best_x = f_new, x + step * direction
                message = "stalled at numerical floor"
                break
        else:
            stalls = 0

        x_new = x + step * direction
        g_new = np.asarray(grad(x_new), dtype=float)
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s) * np.linalg.norm(y) + 1e-300):
            rho = 1.0 / sy
            sy_outer = np.outer(s, y)
            hinv = (
                hinv
                - rho * (sy_outer @ hinv + hinv @ sy_outer.T)
                + rho * np.outer(s, s) * (1.0 + rho * float(y @ hinv @ y))
            )
        x, f, g = x_new, f_new, g_new
        if f < best_f:
            best_f, best_x = f, x.copy()

    else:
        message = "max iterations reached"

    if converged and f <= best_f:
        best_f, best_x = f, x.copy()
    return OptimResult(
        parameters=best_x,
        value=best_f,
        evaluations=obj.evaluations,
        converged=converged,
        iterations=iteration,
        message=message,
    )


def _apply_element(amps, n_qubits, element, theta, fermionic=None):
    fermionic = element.flavor == "fermionic" if fermionic is None else fermionic
    if element.order == "single":
        i, k = element.indices
        kernels.rotate_single(amps, n_qubits, i, k, theta, fermionic)
    else:
        i, j, k, l = element.indices
        kernels.rotate_double(amps, n_qubits, i, j, k, l, theta, fermionic)


def _apply_generator(out, amps, n_qubits, element):
    fermionic = element.flavor == "fermionic"
    if element.order == "single":
        i, k = element.indices
        kernels.generator_single(out, amps, n_qubits, i, k, fermionic)
    else:
        i, j, k, l = element.indices
        kernels.generator_double(out, amps, n_qubits, i, j, k, l, fermionic)


def build_ansatz_state(
    reference: StateVector, elements, theta
) -> StateVector:
    """``prod_p exp(theta_p T_p) |reference>`` applied left to right."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape[0] != len(elements):
        raise ValueError(
            f"{len(elements)} elements but {theta.shape[0]} parameters"
        )
    state = reference.copy()
    for element, t in zip(elements, theta):
        state.apply_excitation(element, float(t))
    return state


def ansatz_energy_and_gradient(
    evaluator: PenaltyEvaluator,
    reference: StateVector,
    elements,
    theta,
):
    """Penalized energy and its full gradient in one backward sweep.

    Forward pass builds chi = U(theta)|ref>; phi = H_k chi supplies the
    energy as Re<chi|phi>.  Unwinding one evolution at a time, each
    gradient component is 2 Re<phi_p|T_p|xi_p> with xi the partial state
    and phi dragged back through the same adjoint rotations.
    """
    theta = np.asarray(theta, dtype=float)
    m = len(elements)
    if theta.shape[0] != m:
        raise ValueError(f"{m} elements but {theta.shape[0]} parameters")

    n = reference.n_qubits
    xi = reference.amplitudes.copy()
    for element, t in zip(elements, theta):
        _apply_element(xi, n, element, float(t))

    norm = float(np.linalg.norm(xi))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NumericalHealthError(
            f"ansatz state norm drifted by {abs(norm - 1.0):.3e}"
        )

    phi = np.empty_like(xi)
    evaluator.apply(xi, phi)
    energy = float(np.vdot(xi, phi).real)

    grad = np.empty(m, dtype=float)
    scratch = np.empty_like(xi)
    for p in range(m - 1, -1, -1):
        element, t = elements[p], float(theta[p])
        _apply_generator(scratch, xi, n, element)
        grad[p] = 2.0 * float(np.vdot(phi, scratch).real)
        _apply_element(xi, n, element, -t)
        _apply_element(phi, n, element, -t)
    return energy, grad


class AnsatzObjective:
    """Energy/gradient pair for a fixed element list, memoized per point.

    BFGS asks for f(x) and grad(x) separately; the adjoint sweep produces
    both at once, so the last evaluation is cached and served to whichever
    query arrives second.
    """

    def __init__(self, evaluator: PenaltyEvaluator, reference: StateVector, elements):
        self.evaluator = evaluator
        self.reference = reference
        self.elements = list(elements)
        self._key = None
        self._energy = None
        self._grad = None
        self.sweeps = 0

    def _compute(self, theta):
        key = np.asarray(theta, dtype=float).tobytes()
        if key != self._key:
            self._energy, self._grad = ansatz_energy_and_gradient(
                self.evaluator, self.reference, self.elements, theta
            )
            self._key = key
            self.sweeps += 1
        return self._energy, self._grad

    def energy(self, theta) -> float:
        return self._compute(theta)[0]

    def gradient(self, theta) -> np.ndarray:
        return self._compute(theta)[1].copy()

    def objective(self) -> Objective:
        return Objective(self.energy, max(1, len(self.elements)))


def minimize_ansatz(
    evaluator: PenaltyEvaluator,
    reference: StateVector,
    elements,
    start,
    gtol: float = BFGS_GTOL,
    max_iters: int = 500,
) -> tuple[OptimResult, AnsatzObjective]:
    """BFGS over all ansatz parameters from the given warm start."""
    shared = AnsatzObjective(evaluator, reference, elements)
    obj = shared.objective()
    result = bfgs(obj, shared.gradient, start, gtol=gtol, max_iters=max_iters)
    return result, shared
