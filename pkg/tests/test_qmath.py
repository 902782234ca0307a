import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qgame import gates
from qgame.qmath import (
    DensityMatrix,
    DimensionError,
    StateVector,
    UnitaryOperator,
    apply,
    commutator_norm,
    expm_hermitian,
    fidelity,
    random_state,
    random_unitary,
    reduced_density,
    states_equal,
    tensor,
    tensor_all,
    von_neumann_entropy,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def U(m, factors=None):
    return UnitaryOperator(m, factors=factors or ())


def test_tensor_of_basis_states():
    zero = StateVector([1, 0], (2,))
    assert np.array_equal(tensor(zero, zero).amps, [1, 0, 0, 0])
    assert tensor(zero, zero).factors == (2, 2)


def test_tensor_of_sigma_z():
    zz = tensor(U(gates.SIGMA_Z, (2,)), U(gates.SIGMA_Z, (2,)))
    assert np.array_equal(zz.matrix, np.diag([1, -1, -1, 1]))


def test_tensor_plus_one():
    plus = StateVector(np.array([1, 1]) / math.sqrt(2), (2,))
    one = StateVector([0, 1], (2,))
    s = 1 / math.sqrt(2)
    assert np.allclose(tensor(plus, one).amps, [0, s, 0, s], atol=1e-15)


def test_tensor_rejects_mixed_kinds():
    with pytest.raises(TypeError):
        tensor(StateVector([1, 0]), U(np.eye(2)))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_tensor_is_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (U(random_unitary(2, rng), (2,)) for _ in range(3))
    left = tensor(a, tensor(b, c))
    right = tensor(tensor(a, b), c)
    assert np.allclose(left.matrix, right.matrix, atol=1e-15, rtol=0)
    assert left.factors == right.factors == (2, 2, 2)
    assert np.allclose(tensor_all(a, b, c).matrix, right.matrix, atol=1e-15, rtol=0)


def test_apply_sigma_x():
    assert np.array_equal(apply(U(gates.SIGMA_X), StateVector([1, 0])).amps, [0, 1])


def test_flip_is_i_sigma_x():
    assert np.allclose(gates.FLIP, 1j * gates.SIGMA_X, atol=1e-15)
    assert np.allclose(gates.FLIP, oracles.expm(1j * np.pi / 2 * gates.SIGMA_X), atol=1e-14)
    assert np.allclose(apply(U(gates.FLIP), StateVector([1, 0])).amps, [0, 1j], atol=1e-15)


def test_flip_on_entangled_input_matches_up_to_phase():
    out = apply(gates.local(gates.FLIP, gates.I2), gates.bell_sym())
    target = StateVector(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))
    assert states_equal(out, target)
    assert not np.allclose(out.amps, target.amps)  # differs by the global phase i


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(U(np.eye(4)), StateVector([1, 0]))


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from([2, 4, 8]))
def test_apply_preserves_norm(seed, dim):
    rng = np.random.default_rng(seed)
    out = apply(U(random_unitary(dim, rng)), random_state(dim, rng))
    assert abs(np.linalg.norm(out.amps) - 1) <= 1e-12


def test_commutator_norm_examples():
    assert commutator_norm(U(gates.SIGMA_Z), U(gates.SIGMA_Z)) == 0
    assert commutator_norm(U(gates.SIGMA_X), U(gates.SIGMA_Z)) == pytest.approx(2 * math.sqrt(2), abs=1e-14)


def test_commutator_norm_invariant_under_conjugation(rng):
    a, b = U(random_unitary(4, rng)), U(random_unitary(4, rng))
    base = commutator_norm(a, b)
    for _ in range(100):
        t = U(random_unitary(4, rng))
        assert abs(commutator_norm(t.dagger @ a @ t, t.dagger @ b @ t) - base) <= 1e-9


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionError):
        commutator_norm(U(np.eye(2)), U(np.eye(4)))


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector([1, 1])
    with pytest.raises(ValueError):
        StateVector([np.nan, 1])
    with pytest.raises(DimensionError):
        StateVector([1, 0, 0], (2, 2))
    assert StateVector.normalized([3, 4]).amps[1] == pytest.approx(0.8)
    with pytest.raises(ValueError):
        StateVector.normalized([0, 0])


def test_state_normalization_tolerance():
    StateVector([1 + 5e-13, 0])
    with pytest.raises(ValueError):
        StateVector([1 + 1e-11, 0])


def test_unitary_validation():
    with pytest.raises(ValueError):
        U([[1, 1], [0, 1]])
    with pytest.raises(DimensionError):
        U(np.ones((2, 3)))
    U(np.eye(2) * (1 + 1e-12))


def test_operators_are_immutable():
    u = U(np.eye(2))
    with pytest.raises(ValueError):
        u.matrix[0, 0] = 2
    s = StateVector([1, 0])
    with pytest.raises(ValueError):
        s.amps[0] = 0


def test_density_validation():
    with pytest.raises(ValueError):
        DensityMatrix([[0.5, 0.1j], [0.1j, 0.5]])
    with pytest.raises(ValueError):
        DensityMatrix([[0.6, 0], [0, 0.6]])
    with pytest.raises(ValueError):
        DensityMatrix([[1.5, 0], [0, -0.5]])


def test_reduced_density_product_state():
    rho = reduced_density(StateVector([0, 1, 0, 0], (2, 2)), 0)
    assert np.allclose(rho.matrix, [[1, 0], [0, 0]], atol=1e-15)


def test_reduced_density_bell_is_maximally_mixed():
    rho = reduced_density(gates.bell_sym(), 0)
    assert np.allclose(rho.matrix, np.eye(2) / 2, atol=1e-15)


def test_reduced_density_partial_against_loop_oracle():
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    psi = StateVector([c, s / math.sqrt(2), s / math.sqrt(2), 0], (2, 2))
    for keep in (0, 1):
        rho = reduced_density(psi, keep)
        ref = oracles.partial_trace_2x2(psi.amps, keep)
        assert np.allclose(rho.matrix, ref, atol=1e-14)
        assert np.allclose(sorted(rho.eigenvalues()), oracles.eig_2x2_hermitian(ref), atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_reduced_density_random_against_oracle(seed):
    psi = random_state(4, np.random.default_rng(seed), (2, 2))
    for keep in (0, 1):
        assert np.allclose(reduced_density(psi, keep).matrix, oracles.partial_trace_2x2(psi.amps, keep), atol=1e-13)


def test_reduced_density_three_factors():
    ghz = StateVector(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / math.sqrt(2), (2, 2, 2))
    for keep in range(3):
        assert np.allclose(reduced_density(ghz, keep).matrix, np.eye(2) / 2, atol=1e-15)


def test_reduced_density_errors():
    with pytest.raises(DimensionError):
        reduced_density(StateVector([1, 0, 0, 0]), 0)
    with pytest.raises(IndexError):
        reduced_density(gates.ground(), 2)


def test_entropy_examples():
    assert von_neumann_entropy(reduced_density(gates.ground(), 0)) == 0
    assert von_neumann_entropy(DensityMatrix(np.eye(2) / 2)) == pytest.approx(math.log(2), abs=1e-14)
    expected = -0.9 * math.log(0.9) - 0.1 * math.log(0.1)
    assert von_neumann_entropy(DensityMatrix(np.diag([0.9, 0.1]))) == pytest.approx(expected, abs=1e-14)
    assert expected == pytest.approx(0.325083, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_schmidt_symmetry(seed):
    psi = random_state(4, np.random.default_rng(seed), (2, 2))
    s_a = von_neumann_entropy(reduced_density(psi, 0))
    s_b = von_neumann_entropy(reduced_density(psi, 1))
    assert abs(s_a - s_b) <= 1e-9
    assert 0 <= s_a <= math.log(2) + 1e-12


def test_entropy_invariant_under_local_unitaries(rng):
    psi = random_state(4, rng, (2, 2))
    s0 = von_neumann_entropy(reduced_density(psi, 0))
    for _ in range(100):
        local = tensor(U(random_unitary(2, rng), (2,)), U(random_unitary(2, rng), (2,)))
        assert abs(von_neumann_entropy(reduced_density(apply(local, psi), 0)) - s0) <= 1e-9


def test_expm_hermitian_matches_scipy(rng):
    for _ in range(20):
        z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = z + z.conj().T
        t = rng.uniform(-3, 3)
        assert np.allclose(expm_hermitian(h, t), oracles.expm(1j * t * h), atol=1e-12)
    with pytest.raises(ValueError):
        expm_hermitian(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("gate,sigma", [(gates.rx, gates.SIGMA_X), (gates.ry, gates.SIGMA_Y), (gates.rz, gates.SIGMA_Z)])
def test_rotation_gates(gate, sigma):
    for theta in (0.0, 0.3, math.pi / 2, 2.5):
        assert np.allclose(gate(theta), oracles.expm(-1j * theta / 2 * sigma), atol=1e-14)


def test_spin_rotation_column_and_eigenstate():
    for theta, phi in [(0.3, 1.1), (math.pi / 2, 0), (2.0, -0.7)]:
        r = gates.spin_rotation(theta, phi)
        c = math.cos(theta / 2) * np.exp(1j * phi / 2)
        s = math.sin(theta / 2) * np.exp(-1j * phi / 2)
        assert np.allclose(r[:, 0], [c, -s], atol=1e-15)
        assert np.allclose(r, gates.rz(-phi) @ gates.ry(-theta), atol=1e-14)
        # with these amplitudes the rotated |0> is the +1 eigenstate of sigma(-theta, -phi)
        v = r[:, 0]
        assert np.allclose(gates.spin_operator(-theta, -phi) @ v, v, atol=1e-14)
        assert np.allclose(gates.spin_operator(-theta, -phi) @ r[:, 1], -r[:, 1], atol=1e-14)


def test_rotated_flip_swaps_rotated_spin_states():
    theta, phi = 1.1, 0.4
    r = gates.spin_rotation(theta, phi)
    out = gates.rotated_flip(theta, phi) @ r[:, 0]
    assert abs(abs(np.vdot(r[:, 1], out)) - 1) <= 1e-14


def test_fidelity_ignores_global_phase(rng):
    psi = random_state(4, rng)
    rotated = StateVector(np.exp(0.7j) * psi.amps)
    assert fidelity(psi, rotated) == pytest.approx(1, abs=1e-14)
    assert states_equal(psi, rotated)
    assert not states_equal(StateVector([1, 0]), StateVector([0, 1]))


def test_random_unitary_is_unitary(rng):
    for dim in (2, 4, 8):
        u = random_unitary(dim, rng)
        assert np.linalg.norm(u.conj().T @ u - np.eye(dim)) < 1e-12
