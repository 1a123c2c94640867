"""Molecular problem-file generator.

Everything is computed from scratch in a minimal Gaussian basis: STO-3G
integrals (McMurchie-Davidson), restricted Hartree-Fock, a determinant
CI for exact sector spectra, and a Jordan-Wigner mapping that writes the
line-oriented problem format consumed by the adapt-xstate solver.  The
two packages share only that file format.
"""

from .generate import build_problem, problem_text

__all__ = ["build_problem", "problem_text"]
