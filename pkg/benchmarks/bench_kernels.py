#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the numpy fallback.

Micro benchmarks call both backend modules directly on identical inputs,
so the numbers isolate the kernel cost from everything above it.  With
``--adapt`` the script also times one full adaptive run per backend (in
subprocesses, since the backend is fixed at import time).

Typical invocation:

    python3 benchmarks/bench_kernels.py --qubits 14 --repeats 20
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from adapt_xstate.kernels import _fallback

try:
    from adapt_xstate.kernels import _core
except ImportError:
    _core = None


def random_amps(n_qubits, rng):
    dim = 1 << n_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return np.ascontiguousarray(amps / np.linalg.norm(amps))


def observable_inputs(n_qubits, n_groups, rng):
    """Representative grouped observable: n_groups X masks, real g vectors."""
    dim = 1 << n_qubits
    x_masks = [0] + [int(x) for x in rng.integers(1, dim, size=n_groups - 1)]
    g_vectors = [np.ascontiguousarray(rng.normal(size=dim)) for _ in x_masks]
    return x_masks, g_vectors


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(impl, n_qubits, repeats, rng):
    amps = random_amps(n_qubits, rng)
    out = np.empty_like(amps)
    x_masks, g_vectors = observable_inputs(n_qubits, 40, rng)
    i, k = 1, n_qubits - 2
    quad = (0, 2, n_qubits - 3, n_qubits - 1)

    work = amps.copy()
    rows = {
        "rotate_single": lambda: impl.rotate_single(
            work, n_qubits, i, k, 0.123, True
        ),
        "rotate_double": lambda: impl.rotate_double(
            work, n_qubits, *quad, 0.123, True
        ),
        "generator_double": lambda: impl.generator_double(
            out, amps, n_qubits, *quad, True
        ),
        "observable_matvec": lambda: impl.observable_matvec(
            out, amps, x_masks, g_vectors
        ),
        "observable_expectation": lambda: impl.observable_expectation(
            amps, x_masks, g_vectors
        ),
        "group_phase_vector": lambda: impl.group_phase_vector(
            np.array([3, 5, 9], dtype=np.uint64),
            np.array([0.5, -0.25, 0.125], dtype=complex),
            n_qubits,
        ),
    }
    return {name: time_call(fn, repeats) for name, fn in rows.items()}


def bench_adapt(backend_env):
    """One ground-state run on the committed 8-qubit fixture."""
    here = os.path.dirname(os.path.abspath(__file__))
    fixture = os.path.join(here, "..", "tests", "fixtures", "synthetic_8q.prob")
    code = (
        "import time, tempfile; "
        "from adapt_xstate.adapt import AdaptConfig, run_adapt; "
        "from adapt_xstate.problems import load_problem; "
        f"p = load_problem({fixture!r}); "
        "t0 = time.perf_counter(); "
        "trace = run_adapt(p, config=AdaptConfig(epsilon=1e-8)); "
        "print(time.perf_counter() - t0, trace.n_iterations)"
    )
    env = dict(os.environ, ADAPT_XSTATE_KERNELS=backend_env)
    res = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True,
        check=True,
    )
    seconds, iterations = res.stdout.split()
    return float(seconds), int(iterations)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, default=14)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--adapt", action="store_true",
                        help="also time one full adaptive run per backend")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    py = bench_backend(_fallback, args.qubits, args.repeats, rng)
    rng = np.random.default_rng(0)
    cy = (
        bench_backend(_core, args.qubits, args.repeats, rng)
        if _core is not None
        else None
    )

    print(f"register: {args.qubits} qubits, best of {args.repeats}")
    header = f"{'kernel':26} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, t_py in py.items():
        if cy is None:
            print(f"{name:26} {t_py * 1e6:10.1f}us {'n/a':>12} {'':>9}")
        else:
            t_cy = cy[name]
            print(
                f"{name:26} {t_py * 1e6:10.1f}us {t_cy * 1e6:10.1f}us "
                f"{t_py / t_cy:8.1f}x"
            )
    if cy is None:
        print("compiled extension not built; only the fallback was timed")

    if args.adapt:
        print()
        for env_value, label in (("py", "python"), ("cy", "compiled")):
            if env_value == "cy" and _core is None:
                continue
            seconds, iterations = bench_adapt(env_value)
            print(
                f"adaptive ground state (8q fixture, {label}): "
                f"{seconds:.2f}s over {iterations} iterations"
            )


if __name__ == "__main__":
    main()
