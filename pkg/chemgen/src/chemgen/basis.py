"""STO-3G basis data and contracted Cartesian Gaussian construction.

Each contracted function is a fixed linear combination of three
primitives sharing a center and Cartesian powers.  The tabulated
contraction coefficients refer to unit-normalized primitives; after
attaching primitive norms the contraction is rescaled so the function
has unit self-overlap.
"""

from dataclasses import dataclass
from math import pi

import numpy as np

# universal STO-3G contraction coefficients (same for every element)
_C_1S = (0.1543289673, 0.5353281423, 0.4446345422)
_C_2S = (-0.09996722919, 0.3995128261, 0.7001154689)
_C_2P = (0.1559162750, 0.6076837186, 0.3919573931)

# per-element primitive exponents; the 2s and 2p shells share theirs
_EXPONENTS = {
    1: {"1s": (3.425250914, 0.6239137298, 0.1688554040)},
    3: {
        "1s": (16.11957475, 2.936200663, 0.794650487),
        "2sp": (0.6362897469, 0.1478600533, 0.0480886784),
    },
    4: {
        "1s": (30.16787069, 5.495115306, 1.487192653),
        "2sp": (1.314833110, 0.3055389383, 0.0993707456),
    },
}

_SYMBOLS = {1: "H", 3: "Li", 4: "Be"}


@dataclass(frozen=True)
class BasisFunction:
    """Contracted Cartesian Gaussian: sum_k coefs[k] * x^i y^j z^k exp(-exps[k] r^2)."""

    center: tuple[float, float, float]
    lmn: tuple[int, int, int]
    exps: tuple[float, ...]
    coefs: tuple[float, ...]  # primitive norms and contraction norm folded in


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def primitive_norm(alpha: float, lmn) -> float:
    i, j, k = lmn
    l = i + j + k
    num = (2.0 * alpha / pi) ** 1.5 * (4.0 * alpha) ** l
    den = (
        _double_factorial(2 * i - 1)
        * _double_factorial(2 * j - 1)
        * _double_factorial(2 * k - 1)
    )
    return float(np.sqrt(num / den))


def _contracted(center, lmn, exps, raw_coefs) -> BasisFunction:
    coefs = [c * primitive_norm(a, lmn) for a, c in zip(exps, raw_coefs)]
    # unit self-overlap; only the (i+j+k)-dependent part of the primitive
    # overlap survives for equal centers
    i, j, k = lmn
    l = i + j + k
    fact = (
        _double_factorial(2 * i - 1)
        * _double_factorial(2 * j - 1)
        * _double_factorial(2 * k - 1)
    )
    s = 0.0
    for a, ca in zip(exps, coefs):
        for b, cb in zip(exps, coefs):
            s += ca * cb * fact / (2.0 * (a + b)) ** l * (pi / (a + b)) ** 1.5
    coefs = [c / np.sqrt(s) for c in coefs]
    return BasisFunction(tuple(center), tuple(lmn), tuple(exps), tuple(coefs))


def atom_basis(z: int, center) -> list[BasisFunction]:
    if z not in _EXPONENTS:
        raise ValueError(f"no STO-3G data for element Z={z}")
    shells = _EXPONENTS[z]
    out = [_contracted(center, (0, 0, 0), shells["1s"], _C_1S)]
    if "2sp" in shells:
        out.append(_contracted(center, (0, 0, 0), shells["2sp"], _C_2S))
        for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            out.append(_contracted(center, lmn, shells["2sp"], _C_2P))
    return out


def build_basis(atoms) -> list[BasisFunction]:
    """``atoms`` is a list of (Z, center-in-bohr) pairs."""
    basis: list[BasisFunction] = []
    for z, center in atoms:
        basis.extend(atom_basis(z, center))
    return basis


def element_symbol(z: int) -> str:
    return _SYMBOLS[z]
