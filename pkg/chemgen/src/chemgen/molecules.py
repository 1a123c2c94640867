"""Geometry builders.  Distances in angstrom, internal units in bohr."""

ANGSTROM_TO_BOHR = 1.8897259886


def h2(r: float):
    d = r * ANGSTROM_TO_BOHR
    return [(1, (0.0, 0.0, 0.0)), (1, (0.0, 0.0, d))]


def h4(r: float):
    """Linear chain with equal spacing."""
    d = r * ANGSTROM_TO_BOHR
    return [(1, (0.0, 0.0, i * d)) for i in range(4)]


def lih(r: float):
    d = r * ANGSTROM_TO_BOHR
    return [(3, (0.0, 0.0, 0.0)), (1, (0.0, 0.0, d))]


def beh2(r: float):
    """Linear symmetric, beryllium at the origin."""
    d = r * ANGSTROM_TO_BOHR
    return [
        (4, (0.0, 0.0, 0.0)),
        (1, (0.0, 0.0, -d)),
        (1, (0.0, 0.0, d)),
    ]


MOLECULES = {
    "h2": (h2, "H2"),
    "h4": (h4, "H4"),
    "lih": (lih, "LiH"),
    "beh2": (beh2, "BeH2"),
}


def build(name: str, r: float):
    """(atoms, electron count, display name) for a registered molecule."""
    try:
        builder, display = MOLECULES[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown molecule {name!r}; have {sorted(MOLECULES)}"
        ) from None
    atoms = builder(r)
    n_electrons = sum(z for z, _ in atoms)
    return atoms, n_electrons, display
