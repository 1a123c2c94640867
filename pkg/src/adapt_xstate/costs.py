"""CNOT and measurement cost accounting.

Per-element CNOT prices are configuration, not physics: the defaults for
qubit excitations (single=2, double=13) reproduce the benchmark totals,
while fermionic elements need user-supplied affine forms in the index
spans because their ladders of Z strings grow with qubit distance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .elements import ExcitationElement

DEFAULT_SINGLE_QUBIT = 2
DEFAULT_DOUBLE_QUBIT = 13

GAMMA_DEFAULT = 10.0


class CostModelError(ValueError):
    """Missing or malformed cost-model configuration."""


@dataclass(frozen=True)
class AffineCost:
    """cost = base + sum(slope * span); spans are index distances."""

    base: int
    slopes: tuple[int, ...]

    def __call__(self, spans: tuple[int, ...]) -> int:
        if len(spans) != len(self.slopes):
            raise CostModelError(
                f"expected {len(self.slopes)} spans, got {len(spans)}"
            )
        return self.base + sum(s * v for s, v in zip(self.slopes, spans))


@dataclass(frozen=True)
class CnotCostModel:
    single_qubit: int | None = DEFAULT_SINGLE_QUBIT
    double_qubit: int | None = DEFAULT_DOUBLE_QUBIT
    single_fermionic: AffineCost | None = None
    double_fermionic: AffineCost | None = None

    def try_element_cost(self, element: ExcitationElement) -> int | None:
        if element.flavor == "qubit":
            value = (
                self.single_qubit if element.order == "single" else self.double_qubit
            )
            return value
        if element.order == "single":
            if self.single_fermionic is None:
                return None
            i, k = element.indices
            return self.single_fermionic((abs(k - i),))
        if self.double_fermionic is None:
            return None
        i, j, k, l = element.indices
        return self.double_fermionic((abs(j - i), abs(l - k)))

    def element_cost(self, element: ExcitationElement) -> int:
        value = self.try_element_cost(element)
        if value is None:
            raise CostModelError(
                f"no cost entry for {element.flavor} {element.order} excitations; "
                "provide a cost-model file"
            )
        return value

    def try_ansatz_count(self, elements) -> int | None:
        total = 0
        for element in elements:
            value = self.try_element_cost(element)
            if value is None:
                return None
            total += value
        return total


def default_cost_model() -> CnotCostModel:
    return CnotCostModel()


def ansatz_cnot_count(elements, model: CnotCostModel) -> int:
    return sum(model.element_cost(e) for e in elements)


def screening_measurement_cost(
    strategy: str, pool_size: int, n_h: int, gamma: float = GAMMA_DEFAULT
) -> float:
    """Expectation-value count for one screening pass over the pool.

    Gradient screening pays 2 per Hamiltonian term per element; the
    energy-reduction strategy pays gamma per term per element, gamma being
    the (empirical) single-angle minimization evaluation count.
    """
    if pool_size <= 0 or n_h <= 0 or gamma <= 0:
        raise CostModelError("pool_size, n_h, gamma must all be positive")
    if strategy == "gradient":
        return 2.0 * n_h * pool_size
    if strategy == "energy":
        return gamma * n_h * pool_size
    raise CostModelError(f"unknown screening strategy {strategy!r}")


_INT_LINE = re.compile(r"^\s*(-?\d+)\s*$")
_AFFINE_TERM = re.compile(r"^\s*(?:(-?\d+)\s*\*\s*)?(span[12]?)\s*$|^\s*(-?\d+)\s*$")


def _parse_affine(line_no: int, text: str, span_names: tuple[str, ...]) -> AffineCost:
    base = 0
    slopes = {name: 0 for name in span_names}
    for chunk in text.split("+"):
        m = _AFFINE_TERM.match(chunk)
        if m is None:
            raise CostModelError(f"line {line_no}: bad cost term {chunk.strip()!r}")
        if m.group(3) is not None:
            base += int(m.group(3))
            continue
        name = m.group(2)
        if name not in slopes:
            raise CostModelError(
                f"line {line_no}: span {name!r} not valid here (expected "
                f"{', '.join(span_names)})"
            )
        slopes[name] += int(m.group(1)) if m.group(1) is not None else 1
    return AffineCost(base, tuple(slopes[name] for name in span_names))


def parse_cost_model(text: str) -> CnotCostModel:
    """Read the cost file; unspecified kinds keep their defaults.

    Lines: ``single_qubit: 2``, ``double_qubit: 13``,
    ``single_fermionic: a+b*span``, ``double_fermionic: a+b*span1+c*span2``.
    """
    fields: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if not sep or not value:
            raise CostModelError(f"line {line_no}: expected 'key: value'")
        if key in ("single_qubit", "double_qubit"):
            m = _INT_LINE.match(value)
            if m is None:
                raise CostModelError(f"line {line_no}: {key} needs an integer")
            cost = int(m.group(1))
            if cost <= 0:
                raise CostModelError(f"line {line_no}: {key} must be positive")
            fields[key] = cost
        elif key == "single_fermionic":
            fields[key] = _parse_affine(line_no, value, ("span",))
        elif key == "double_fermionic":
            fields[key] = _parse_affine(line_no, value, ("span1", "span2"))
        else:
            raise CostModelError(f"line {line_no}: unknown key {key!r}")
    return CnotCostModel(**fields)


def load_cost_model(path) -> CnotCostModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_cost_model(fh.read())
