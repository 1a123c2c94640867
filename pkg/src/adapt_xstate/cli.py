"""Command-line driver.

Subcommands: solve (one problem, adaptive or fixed ansatz, any target
state), sweep (a directory of problems, one row per file), compare (two
runs differing in one axis, aligned per iteration), spectrum (exact
sector eigenvalues).  Every CSV starts with a ``#`` stamp line recording
the full configuration.  Exit codes: 0 success, 1 non-convergence,
2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import re
import sys
import tempfile

import numpy as np

from .adapt import (
    ENERGY,
    GRADIENT,
    AdaptConfig,
    AdaptConfigError,
    AdaptTrace,
    IterationRecord,
    excited_ladder,
    write_trace_csv,
)
from .costs import CostModelError, default_cost_model, load_cost_model
from .elements import FERMIONIC, QUBIT
from .observables import PenaltyEvaluator
from .optimize import minimize_ansatz
from .pool import fermionic_pool, uccsd_elements
from .problems import (
    CapacityError,
    MolecularProblem,
    ProblemFormatError,
    default_alpha,
    exact_spectrum,
    load_problem,
    sector_dimension,
)
from .state import StateVector, compile_observable, prepare_reference

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Usage or I/O failure; maps to exit code 2."""


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProblemFormatError, CostModelError, CapacityError, AdaptConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adapt-xstate",
        description="Adaptive excitation-ansatz eigensolver on a statevector simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one problem file")
    _common_flags(solve)
    solve.add_argument(
        "--ansatz", choices=["adapt", "uccsd", "guccsd"], default="adapt"
    )
    solve.add_argument(
        "--states-dir", default=None,
        help="directory for intermediate eigenstate files (default: temp dir)",
    )
    solve.set_defaults(func=cmd_solve)

    sweep = sub.add_parser("sweep", help="solve every problem file in a directory")
    _common_flags(sweep)
    sweep.add_argument(
        "--ansatz", choices=["adapt", "uccsd", "guccsd"], default="adapt"
    )
    sweep.set_defaults(func=cmd_sweep)

    compare = sub.add_parser(
        "compare", help="two runs differing in one axis, aligned per iteration"
    )
    _common_flags(compare)
    compare.add_argument(
        "--axis", choices=["strategy", "flavor"], default="strategy"
    )
    compare.set_defaults(func=cmd_compare)

    spectrum = sub.add_parser("spectrum", help="exact lowest eigenvalues")
    spectrum.add_argument("--hamiltonian", required=True)
    spectrum.add_argument("--levels", type=int, default=10)
    spectrum.add_argument(
        "--sector", type=int, default=None,
        help="Hamming-weight restriction (default: the problem's electron count)",
    )
    spectrum.add_argument(
        "--full", action="store_true", help="diagonalize without sector restriction"
    )
    spectrum.add_argument("--output", default=None)
    spectrum.set_defaults(func=cmd_spectrum)

    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hamiltonian", required=True, help="problem file (or directory for sweep)")
    p.add_argument("--pool", choices=[QUBIT, FERMIONIC], default=QUBIT)
    p.add_argument("--strategy", choices=[ENERGY, GRADIENT], default=ENERGY)
    p.add_argument("--epsilon", type=float, default=1e-8)
    p.add_argument("--n-candidates", type=int, default=10)
    p.add_argument("--target-state", type=int, default=0)
    p.add_argument("--alpha", type=float, default=None,
                   help="penalty weight (default: derived from the coefficient 1-norm)")
    p.add_argument("--cost-model", default=None)
    p.add_argument("--output", default=None, help="output CSV path")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--trig-screening", action="store_true",
                   help="closed-form single-angle minimization during screening")
    p.add_argument("--switch-gradient-at", type=int, default=None,
                   help="iteration at which energy screening hands over to gradient")


def _stamp(args: argparse.Namespace) -> str:
    parts = [f"adapt-xstate {args.command}"]
    for key in sorted(vars(args)):
        if key in ("func", "command"):
            continue
        value = getattr(args, key)
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        parts.append(flag if value is True else f"{flag} {value}")
    return " ".join(parts)


def _load_problem(path) -> MolecularProblem:
    if not os.path.exists(path):
        raise CliError(f"no such file: {path}")
    return load_problem(path)


def _config_from(args) -> AdaptConfig:
    return AdaptConfig(
        epsilon=args.epsilon,
        n_candidates=args.n_candidates,
        max_iterations=args.max_iterations,
        pool_flavor=args.pool,
        strategy=args.strategy,
        target_state=args.target_state,
        alpha=args.alpha,
        threads=args.threads,
        trig_screening=args.trig_screening,
        switch_to_gradient_at=args.switch_gradient_at,
    )


def _cost_model_from(args):
    if args.cost_model is None:
        return default_cost_model()
    if not os.path.exists(args.cost_model):
        raise CliError(f"no such file: {args.cost_model}")
    return load_cost_model(args.cost_model)


def _fixed_elements(ansatz: str, problem: MolecularProblem):
    if ansatz == "uccsd":
        return uccsd_elements(problem.n_qubits, problem.n_electrons)
    return fermionic_pool(problem.n_qubits)


def _fixed_ladder(problem, elements, up_to_k, alpha, output_dir):
    """Stage-wise fixed-ansatz minimization with overlap penalties."""
    os.makedirs(output_dir, exist_ok=True)
    reference = prepare_reference(problem.n_qubits, problem.n_electrons)
    found: list[StateVector] = []
    stages = []
    base = compile_observable(problem.hamiltonian)
    for k in range(up_to_k + 1):
        weight = alpha if alpha is not None else default_alpha(problem.hamiltonian)
        evaluator = PenaltyEvaluator(
            base, [(weight, s.amplitudes) for s in found]
        )
        result, shared = minimize_ansatz(
            evaluator, reference, elements, np.zeros(len(elements)), max_iters=2000
        )
        from .optimize import build_ansatz_state

        state = build_ansatz_state(reference, elements, result.parameters)
        path = os.path.join(output_dir, f"state_{k}.qsv")
        state.save(path)
        energy = float(base.expectation(state.amplitudes).real)
        stages.append((k, energy, result, shared.sweeps, path))
        found.append(state)
    return stages


def cmd_solve(args) -> int:
    problem = _load_problem(args.hamiltonian)
    cost_model = _cost_model_from(args)
    states_dir = args.states_dir or tempfile.mkdtemp(prefix="adapt-xstate-")
    stamp = _stamp(args)

    if args.ansatz == "adapt":
        config = _config_from(args)
        stages = excited_ladder(
            problem, config, args.target_state, states_dir, cost_model=cost_model
        )
        for stage in stages:
            t = stage.trace
            print(
                f"state {stage.k}: E = {stage.energy:.12f}  "
                f"iterations = {t.n_iterations}  converged = {t.converged}"
            )
        final = stages[-1]
        trace = final.trace
        _print_summary(problem, args, final.k, final.energy, trace.n_iterations,
                       _trace_cnots(trace), trace.converged)
        if args.output:
            write_trace_csv(trace, args.output, stamp)
        reached_target = final.k == args.target_state and trace.converged
        return EXIT_OK if reached_target else EXIT_NOT_CONVERGED

    elements = _fixed_elements(args.ansatz, problem)
    stages = _fixed_ladder(
        problem, elements, args.target_state, args.alpha, states_dir
    )
    k, energy, result, sweeps, _ = stages[-1]
    cnots = cost_model.try_ansatz_count(elements)
    _print_summary(problem, args, k, energy, result.iterations, cnots, result.converged)
    if args.output:
        trace = _fixed_trace(problem, args, energy, result, elements, cnots, sweeps)
        write_trace_csv(trace, args.output, stamp)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _trace_cnots(trace: AdaptTrace):
    return trace.records[-1].cnot_count if trace.records else 0


def _fixed_trace(problem, args, energy, result, elements, cnots, sweeps) -> AdaptTrace:
    fci_ref = None
    if args.target_state < len(problem.fci_energies):
        fci_ref = problem.fci_energies[args.target_state]
    record = IterationRecord(
        iteration=1,
        element=elements[0],
        delta_e=float("nan"),
        energy=energy,
        error_vs_fci=None if fci_ref is None else energy - fci_ref,
        n_params=len(elements),
        cnot_count=cnots,
        screen_evals=0,
        vqe_evals=sweeps,
        theta=tuple(float(t) for t in result.parameters),
        inner_converged=result.converged,
    )
    return AdaptTrace(
        converged=result.converged,
        termination="fixed",
        initial_energy=float("nan"),
        final_energy=energy,
        final_base_energy=energy,
        elements=list(elements),
        theta=tuple(float(t) for t in result.parameters),
        records=[record],
        fci_reference=fci_ref,
        label=problem.label,
    )


def _print_summary(problem, args, k, energy, iterations, cnots, converged) -> None:
    print(f"final energy (state {k}): {energy:.12f} Ha")
    if k < len(problem.fci_energies):
        err = energy - problem.fci_energies[k]
        print(f"error vs FCI: {err:.3e} Ha")
    print(f"iterations: {iterations}")
    print(f"cnot count: {cnots if cnots is not None else 'n/a (no cost model entry)'}")
    print(f"converged: {converged}")


_DISTANCE = re.compile(r"r\s*=\s*([0-9]+(?:\.[0-9]+)?)")


def _distance_of(problem: MolecularProblem, path: str) -> str:
    m = _DISTANCE.search(problem.label)
    if m:
        return m.group(1)
    stem = os.path.splitext(os.path.basename(path))[0]
    m = re.search(r"([0-9]+\.[0-9]+)", stem)
    return m.group(1) if m else stem


def cmd_sweep(args) -> int:
    directory = args.hamiltonian
    if not os.path.isdir(directory):
        raise CliError(f"not a directory: {directory}")
    files = sorted(
        os.path.join(directory, name)
        for name in os.listdir(directory)
        if name.endswith(".prob")
    )
    if not files:
        raise CliError(f"no .prob files in {directory}")

    cost_model = _cost_model_from(args)
    method = (
        args.ansatz
        if args.ansatz != "adapt"
        else f"adapt-{args.pool}-{args.strategy}"
    )
    rows = []
    any_failed = False
    for path in files:
        try:
            problem = load_problem(path)
            distance = _distance_of(problem, path)
            with tempfile.TemporaryDirectory() as states_dir:
                if args.ansatz == "adapt":
                    config = _config_from(args)
                    stages = excited_ladder(
                        problem, config, args.target_state, states_dir,
                        cost_model=cost_model,
                    )
                    final = stages[-1]
                    ok = final.k == args.target_state and final.trace.converged
                    energy = final.energy
                    n_params = len(final.trace.elements)
                    cnots = _trace_cnots(final.trace)
                else:
                    elements = _fixed_elements(args.ansatz, problem)
                    stages = _fixed_ladder(
                        problem, elements, args.target_state, args.alpha, states_dir
                    )
                    _, energy, result, _, _ = stages[-1]
                    ok = result.converged
                    n_params = len(elements)
                    cnots = cost_model.try_ansatz_count(elements)
            err = ""
            if args.target_state < len(problem.fci_energies):
                err = repr(energy - problem.fci_energies[args.target_state])
            rows.append([
                distance, method, repr(energy), err, n_params,
                "" if cnots is None else cnots,
            ])
            if not ok:
                any_failed = True
                print(f"warning: {path} did not converge", file=sys.stderr)
        except (ValueError, RuntimeError) as exc:
            any_failed = True
            print(f"warning: {path}: {exc}", file=sys.stderr)
            rows.append([_distance_of_path(path), method, "", "", "", ""])

    out = args.output or "sweep.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {_stamp(args)}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["distance", "method", "energy", "error_vs_fci", "n_params", "cnot_count"]
        )
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_NOT_CONVERGED if any_failed else EXIT_OK


def _distance_of_path(path: str) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    m = re.search(r"([0-9]+\.[0-9]+)", stem)
    return m.group(1) if m else stem


def cmd_compare(args) -> int:
    problem = _load_problem(args.hamiltonian)
    cost_model = _cost_model_from(args)

    if args.axis == "strategy":
        variants = [("energy", ENERGY, args.pool), ("gradient", GRADIENT, args.pool)]
    else:
        variants = [("qubit", args.strategy, QUBIT), ("fermionic", args.strategy, FERMIONIC)]

    traces = []
    for name, strategy, flavor in variants:
        config = AdaptConfig(
            epsilon=args.epsilon,
            n_candidates=args.n_candidates,
            max_iterations=args.max_iterations,
            pool_flavor=flavor,
            strategy=strategy,
            target_state=args.target_state,
            alpha=args.alpha,
            threads=args.threads,
            trig_screening=args.trig_screening,
            switch_to_gradient_at=args.switch_gradient_at,
        )
        with tempfile.TemporaryDirectory() as states_dir:
            stages = excited_ladder(
                problem, config, args.target_state, states_dir, cost_model=cost_model
            )
        traces.append((name, stages[-1].trace))
        print(
            f"{name}: iterations = {stages[-1].trace.n_iterations}, "
            f"E = {stages[-1].energy:.12f}, converged = {stages[-1].trace.converged}"
        )

    out = args.output or "compare.csv"
    header = ["iteration"]
    for name, _ in traces:
        header += [f"energy_{name}", f"error_{name}"]
    depth = max(t.n_iterations for _, t in traces)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {_stamp(args)}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(depth):
            row = [i + 1]
            for _, trace in traces:
                if i < len(trace.records):
                    rec = trace.records[i]
                    row.append(repr(rec.energy))
                    row.append("" if rec.error_vs_fci is None else repr(rec.error_vs_fci))
                else:
                    row += ["", ""]
            writer.writerow(row)
    print(f"wrote {out}")
    all_ok = all(t.converged for _, t in traces)
    return EXIT_OK if all_ok else EXIT_NOT_CONVERGED


def cmd_spectrum(args) -> int:
    problem = _load_problem(args.hamiltonian)
    sector = None if args.full else (
        args.sector if args.sector is not None else problem.n_electrons
    )
    dim = (
        1 << problem.n_qubits
        if sector is None
        else sector_dimension(problem.n_qubits, sector)
    )
    values = exact_spectrum(problem, k=min(args.levels, dim), sector=sector)
    for idx, value in enumerate(values):
        print(f"{idx}  {value:.12f}")
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            fh.write(f"# {_stamp(args)}\n")
            writer = csv.writer(fh)
            writer.writerow(["index", "energy"])
            for idx, value in enumerate(values):
                writer.writerow([idx, repr(value)])
        print(f"wrote {args.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
