import numpy as np
import pytest

from adapt_xstate.elements import FERMIONIC, QUBIT, canonical_double, single
from adapt_xstate.paulis import PauliSum, PauliTerm, excitation_generator
from adapt_xstate.state import (
    NumericalHealthError,
    StateError,
    StateVector,
    compile_observable,
    prepare_reference,
)

import oracles
from helpers import make_sum


def test_init_requires_normalization():
    with pytest.raises(NumericalHealthError):
        StateVector(np.array([1.0, 1.0], dtype=complex))


def test_init_unchecked_allows_anything():
    v = StateVector(np.array([2.0, 0.0], dtype=complex), check=False)
    assert v.norm() == pytest.approx(2.0)


def test_computational_basis():
    v = StateVector.computational_basis(3, 5)
    assert v.amplitudes[5] == 1.0
    assert np.count_nonzero(v.amplitudes) == 1


def test_reference_occupies_lowest_orbitals():
    v = prepare_reference(4, 2)
    assert v.amplitudes[0b0011] == 1.0
    with pytest.raises(StateError):
        prepare_reference(4, 5)


def test_copy_is_independent():
    v = prepare_reference(3, 1)
    w = v.copy()
    w.amplitudes[0] = 0.5
    assert v.amplitudes[0] == 0.0


@pytest.mark.parametrize("flavor", [QUBIT, FERMIONIC])
def test_apply_excitation_single_matches_expm(flavor, rng):
    n = 5
    theta = 0.83
    psi = StateVector(oracles.random_state(n, rng))
    want = oracles.expm_skew(
        oracles.single_generator(n, 3, 1, flavor == FERMIONIC), theta
    ) @ psi.amplitudes
    psi.apply_excitation(single(flavor, 3, 1), theta)
    np.testing.assert_allclose(psi.amplitudes, want, atol=1e-10)


@pytest.mark.parametrize("flavor", [QUBIT, FERMIONIC])
def test_apply_excitation_double_matches_expm(flavor, rng):
    n = 6
    el = canonical_double(flavor, (0, 2), (1, 4), )
    theta = -0.41
    psi = StateVector(oracles.random_state(n, rng))
    i, j, k, l = el.indices
    want = oracles.expm_skew(
        oracles.double_generator(n, i, j, k, l, flavor == FERMIONIC), theta
    ) @ psi.amplitudes
    psi.apply_excitation(el, theta)
    np.testing.assert_allclose(psi.amplitudes, want, atol=1e-10)


def test_apply_excitation_uses_stored_theta(rng):
    psi = StateVector(oracles.random_state(4, rng))
    ref = psi.copy()
    el = single(QUBIT, 2, 0, theta=0.37)
    psi.apply_excitation(el)
    ref.apply_excitation(el, 0.37)
    np.testing.assert_allclose(psi.amplitudes, ref.amplitudes, atol=1e-15)


def test_apply_generator_matches_dense(rng):
    n = 5
    psi = StateVector(oracles.random_state(n, rng))
    el = single(FERMIONIC, 4, 0)
    got = psi.apply_generator(el)
    want = oracles.single_generator(n, 4, 0, True) @ psi.amplitudes
    np.testing.assert_allclose(got.amplitudes, want, atol=1e-12)


def test_pauli_exponential_matches_dense(rng):
    n = 3
    psi = StateVector(oracles.random_state(n, rng))
    term = PauliTerm(1.0, ((0, "X"), (2, "Y")), n)
    angle = 0.62
    p = term.to_matrix()
    want = (np.cos(angle) * np.eye(1 << n) + 1j * np.sin(angle) * p) @ psi.amplitudes
    psi.apply_pauli_exponential(term, angle)
    np.testing.assert_allclose(psi.amplitudes, want, atol=1e-12)


def test_pauli_exponential_rejects_scaled_terms(rng):
    psi = prepare_reference(2, 1)
    with pytest.raises(StateError):
        psi.apply_pauli_exponential(PauliTerm(0.5, ((0, "X"),), 2), 0.1)


def test_qubit_double_rotation_equals_string_product(rng):
    """The eight commuting strings of a double generator compose to the kernel."""
    n = 4
    el = canonical_double(QUBIT, (0, 1), (2, 3))
    theta = 0.57
    psi = StateVector(oracles.random_state(n, rng))
    via_strings = psi.copy()
    for t in excitation_generator(el, n).terms:
        # T = sum_s i * lam_s * P_s with all strings commuting, so
        # exp(theta T) factors into exp(i theta lam_s P_s) terms
        lam = (t.coefficient / 1j).real
        assert abs(t.coefficient - 1j * lam) < 1e-14
        unit = PauliTerm(1.0, t.ops, n)
        via_strings.apply_pauli_exponential(unit, theta * lam)
    psi.apply_excitation(el, theta)
    np.testing.assert_allclose(via_strings.amplitudes, psi.amplitudes, atol=1e-12)


def test_inner_product(rng):
    a = StateVector(oracles.random_state(4, rng))
    b = StateVector(oracles.random_state(4, rng))
    assert a.inner_product(b) == pytest.approx(np.vdot(a.amplitudes, b.amplitudes))
    with pytest.raises(StateError):
        a.inner_product(StateVector(oracles.random_state(3, rng)))


def test_expectation_matches_dense(rng):
    n = 4
    specs = oracles.random_hermitian_terms(n, 6, rng)
    ham = make_sum(specs, n)
    psi = StateVector(oracles.random_state(n, rng))
    want = np.vdot(psi.amplitudes, ham.to_matrix() @ psi.amplitudes).real
    assert psi.expectation(ham) == pytest.approx(want, abs=1e-12)


def test_expectation_rejects_non_hermitian():
    op = PauliSum([PauliTerm(1.0j, ((0, "Z"),), 2)], n_qubits=2)
    psi = prepare_reference(2, 1)
    with pytest.raises(StateError):
        psi.expectation(op)


def test_norm_drift_detected():
    psi = prepare_reference(3, 1)
    psi.amplitudes *= 1.1  # simulate corruption
    with pytest.raises(NumericalHealthError):
        psi.check_norm()


def test_save_load_round_trip(tmp_path, rng):
    psi = StateVector(oracles.random_state(5, rng))
    path = tmp_path / "state.qsv"
    psi.save(path)
    back = StateVector.load(path)
    assert back.n_qubits == 5
    np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)


def test_load_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.qsv"
    path.write_bytes(b"NOPE" + b"\x00" * 20)
    with pytest.raises(StateError):
        StateVector.load(path)


def test_load_rejects_truncated_payload(tmp_path):
    psi = prepare_reference(3, 1)
    path = tmp_path / "trunc.qsv"
    psi.save(path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(StateError):
        StateVector.load(path)


def test_compile_observable_memoizes():
    ham = make_sum([(0.5, ((0, "Z"),))], 2)
    assert compile_observable(ham) is compile_observable(ham)
