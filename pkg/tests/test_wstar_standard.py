"""Standard forms: modular data, commutation theorem, tracial degeneration."""

import numpy as np
import pytest

from moritalab.errors import AlgebraMismatch, NotFaithful
from moritalab.numkernel import commutant, matrices_to_columns, operator_norm, subspaces_equal
from moritalab.wstar import (
    MultiMatrixAlgebra,
    State,
    gns_standard_form,
    random_faithful_state,
    trace_state,
)

M2 = MultiMatrixAlgebra((2,), name="M2")
M3 = MultiMatrixAlgebra((3,), name="M3")
M23 = MultiMatrixAlgebra((2, 3), name="M2+M3")


def _check_modular_identities(std, tol=1e-9):
    d = std.dim
    half = std.delta_half
    S_from_parts = std.J.compose_linear(half).matrix
    assert operator_norm(S_from_parts - std.S.matrix) <= tol
    assert operator_norm(std.J.compose_antilinear(std.J) - np.eye(d)) <= tol
    # the right action is exactly the commutant of the left one
    comm = commutant(std.pi_l_units, d)
    same, res = subspaces_equal(comm, matrices_to_columns(std.pi_r_units))
    assert same and res <= 1e-8
    # conjugating by the modular operator fixes the center pointwise
    for z in std.algebra.center_basis():
        Z = std.pi_l(z)
        assert operator_norm(std.delta @ Z - Z @ std.delta) <= tol


class TestAlgebras:
    def test_dimensions_and_units(self):
        assert M23.dim == 5
        assert M23.vector_dim == 13
        assert len(M23.matrix_units()) == 13
        assert len(M23.center_basis()) == 2

    def test_coords_round_trip(self):
        rng = np.random.default_rng(0)
        x = M23.random_element(rng)
        assert np.allclose(M23.from_coords(M23.coords(x)), x)

    def test_coords_rejects_off_block_entries(self):
        x = np.zeros((5, 5), dtype=np.complex128)
        x[0, 3] = 1.0
        with pytest.raises(AlgebraMismatch):
            M23.coords(x)

    def test_state_guards(self):
        with pytest.raises(NotFaithful):
            State(M2, np.diag([1.0, 0.0]).astype(np.complex128))
        with pytest.raises(NotFaithful):
            State(M2, np.diag([0.7, 0.7]).astype(np.complex128))
        with pytest.raises(AlgebraMismatch):
            State(M23, np.eye(4, dtype=np.complex128) / 4.0)

    def test_random_state_faithful_normalized(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            phi = random_faithful_state(M23, rng)
            evals = np.linalg.eigvalsh(phi.density)
            assert evals.min() >= 1e-3 - 1e-12
            assert abs(np.trace(phi.density) - 1.0) < 1e-10

    def test_trace_state_is_tracial(self):
        assert trace_state(M23).is_tracial()
        rng = np.random.default_rng(2)
        assert not random_faithful_state(M23, rng).is_tracial()


class TestModularData:
    def test_known_spectrum_of_modular_operator(self):
        # density diag(2/3, 1/3): conjugation by it has eigenvalues
        # {1, 1, 2, 1/2}, computed directly from rho E rho^{-1}
        phi = State(M2, np.diag([2 / 3, 1 / 3]).astype(np.complex128))
        std = gns_standard_form(M2, phi)
        got = np.sort(np.linalg.eigvalsh(std.delta))
        assert np.allclose(got, [0.5, 1.0, 1.0, 2.0], atol=1e-9)
        rho = phi.density
        rho_inv = np.diag(1.0 / np.diag(rho))
        oracle = np.stack(
            [M2.coords(rho @ E @ rho_inv) for E in M2.matrix_units()], axis=1)
        assert operator_norm(std.delta - oracle) <= 1e-9

    def test_lambda_is_isometric_for_the_state(self):
        rng = np.random.default_rng(3)
        phi = random_faithful_state(M23, rng)
        std = gns_standard_form(M23, phi)
        for _ in range(5):
            x = M23.random_element(rng)
            y = M23.random_element(rng)
            got = np.vdot(std.Lambda(x), std.Lambda(y))
            assert abs(got - phi(x.conj().T @ y)) < 1e-10

    def test_cyclic_vector_is_fixed_by_modular_data(self):
        rng = np.random.default_rng(4)
        std = gns_standard_form(M23, random_faithful_state(M23, rng))
        cyc = std.cyclic_vector()
        assert np.allclose(std.delta @ cyc, cyc, atol=1e-9)
        assert np.allclose(std.J.apply(cyc), cyc, atol=1e-9)

    @pytest.mark.parametrize("alg", [M2, M3, M23])
    def test_modular_identities_random_states(self, alg):
        rng = np.random.default_rng(alg.dim)
        for _ in range(2):
            std = gns_standard_form(alg, random_faithful_state(alg, rng))
            _check_modular_identities(std)

    def test_left_action_reproduces_state(self):
        rng = np.random.default_rng(5)
        phi = random_faithful_state(M2, rng)
        std = gns_standard_form(M2, phi)
        cyc = std.cyclic_vector()
        for _ in range(5):
            x = M2.random_element(rng)
            assert abs(np.vdot(cyc, std.pi_l(x) @ cyc) - phi(x)) < 1e-10

    def test_modular_twist_matches_density_conjugation(self):
        phi = State(M2, np.diag([2 / 3, 1 / 3]).astype(np.complex128))
        std = gns_standard_form(M2, phi)
        rng = np.random.default_rng(6)
        y = M2.random_element(rng)
        rho = phi.density
        r_half = np.diag(np.diag(rho) ** 0.5)
        r_mhalf = np.diag(np.diag(rho) ** -0.5)
        assert np.allclose(std.modular_twist(y, sign=-1),
                           r_mhalf @ y @ r_half, atol=1e-10)
        assert np.allclose(std.modular_twist(y, sign=+1),
                           r_half @ y @ r_mhalf, atol=1e-10)


class TestTracialCase:
    @pytest.mark.parametrize("alg", [M2, M23])
    def test_modular_operator_is_identity(self, alg):
        std = gns_standard_form(alg, trace_state(alg))
        assert operator_norm(std.delta - np.eye(std.dim)) <= 1e-12

    def test_right_action_is_plain_right_multiplication(self):
        std = gns_standard_form(M2, trace_state(M2))
        rng = np.random.default_rng(7)
        y = M2.random_element(rng)
        units = M2.matrix_units()
        right = np.stack([M2.coords(E @ y) for E in units], axis=1)
        assert operator_norm(std.pi_r(y) - right) <= 1e-12

    def test_twist_is_trivial(self):
        std = gns_standard_form(M23, trace_state(M23))
        rng = np.random.default_rng(8)
        y = M23.random_element(rng)
        assert np.allclose(std.modular_twist(y, sign=-1), y, atol=1e-12)
