import numpy as np
import pytest

from chemgen import build_problem
from chemgen.molecules import h2
from chemgen.scf import mo_integrals, restricted_hartree_fock


@pytest.fixture
def rng():
    return np.random.default_rng(90125)


@pytest.fixture(scope="session")
def h2_result():
    """Converged RHF for H2 at the experimental bond length."""
    return restricted_hartree_fock(h2(0.7414), 2)


@pytest.fixture(scope="session")
def h2_mo(h2_result):
    return mo_integrals(h2_result)


@pytest.fixture(scope="session")
def lih_problem():
    return build_problem("lih", 1.546, levels=8)
