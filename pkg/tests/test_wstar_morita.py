"""Equivalence certificates for correspondences, positive and refuted."""

import numpy as np
import pytest

from moritalab.numkernel import operator_norm
from moritalab.wstar import (
    Correspondence,
    Intertwiner,
    MultiMatrixAlgebra,
    State,
    block_correspondence,
    certify_morita_equivalent,
    conjugate_correspondence,
    connes_fusion,
    corr_from_homomorphism,
    gns_standard_form,
    identity_correspondence,
    random_faithful_state,
    trace_state,
    unitary_intertwiner,
    vector_correspondence,
)

M2 = MultiMatrixAlgebra((2,), name="M2")


class TestPositive:
    @pytest.mark.parametrize("n", [2, 3])
    def test_column_space_links_matrices_to_scalars(self, n):
        cert = certify_morita_equivalent(vector_correspondence(n))
        assert cert.equivalent
        assert cert.residual <= 1e-8
        # the fused square recovers the full standard space of M_n
        assert cert.fusion_left.corr.dim == n * n
        assert cert.fusion_right.corr.dim == 1
        assert cert.unitary_left.shape == (n * n, n * n)

    def test_identity_correspondence_self_equivalence(self):
        phi = State(M2, np.diag([2 / 3, 1 / 3]).astype(np.complex128))
        std = gns_standard_form(M2, phi)
        cert = certify_morita_equivalent(identity_correspondence(std),
                                         phi_M=phi, phi_N=phi)
        assert cert.equivalent
        assert cert.residual <= 1e-8

    def test_multi_block_self_equivalence(self):
        alg = MultiMatrixAlgebra((2, 3))
        rng = np.random.default_rng(0)
        phi = random_faithful_state(alg, rng)
        std = gns_standard_form(alg, phi)
        cert = certify_morita_equivalent(identity_correspondence(std),
                                         phi_M=phi, phi_N=phi)
        assert cert.equivalent

    def test_certificate_unitaries_intertwine(self):
        cert = certify_morita_equivalent(vector_correspondence(2))
        idM = identity_correspondence(
            gns_standard_form(M2, trace_state(M2)))
        t = Intertwiner(cert.fusion_left.corr, idM, cert.unitary_left)
        assert t.residual() <= 1e-8
        assert t.is_unitary(1e-8)

    def test_verdict_independent_of_states(self):
        rng = np.random.default_rng(1)
        H = vector_correspondence(2)
        phi = random_faithful_state(H.left_algebra, rng)
        psi = random_faithful_state(H.right_algebra, rng)
        cert = certify_morita_equivalent(H, phi_M=phi, phi_N=psi)
        assert cert.equivalent

    def test_hom_built_column_certifies(self):
        # embedding the scalars on the first diagonal entry carves out a
        # column, which is the basic equivalence bimodule
        std = gns_standard_form(M2, trace_state(M2))
        C = MultiMatrixAlgebra((1,), name="C")
        corr = corr_from_homomorphism(
            [np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)], C, std)
        cert = certify_morita_equivalent(corr)
        assert cert.equivalent


class TestRefuted:
    def test_doubled_column_has_oversized_commutant(self):
        C = MultiMatrixAlgebra((1,), name="C")
        doubled = block_correspondence(M2, C, [[2]])
        cert = certify_morita_equivalent(doubled)
        assert not cert.equivalent
        assert "commutant" in cert.reason

    def test_direct_sum_with_identity_refuted(self):
        # L2(M2) + C^2 over (M2, M2+C): right action cannot fill commutant
        alg = MultiMatrixAlgebra((2, 1))
        H = block_correspondence(M2, alg, [[1, 2]])
        cert = certify_morita_equivalent(H)
        assert not cert.equivalent

    def test_unfaithful_left_action_refuted_first(self):
        # a five-dimensional algebra pushed onto a two-dimensional space
        # cannot act faithfully; the broken commutation is never reached
        A = MultiMatrixAlgebra((2, 3), name="M2+M3")
        B = MultiMatrixAlgebra((2,), name="M2")
        pi_l = []
        for (b, i, j) in A.unit_triples():
            U = np.zeros((2, 2), dtype=np.complex128)
            if b == 0:
                U[i, j] = 1.0
            pi_l.append(U)
        pi_r = []
        for (b, i, j) in B.unit_triples():
            U = np.zeros((2, 2), dtype=np.complex128)
            U[j, i] = 1.0
            pi_r.append(U)
        bad = Correspondence(A, B, 2, tuple(pi_l), tuple(pi_r), validate=False)
        cert = certify_morita_equivalent(bad)
        assert not cert.equivalent
        assert "faithful" in cert.reason

    def test_zero_correspondence_refuted(self):
        Z = block_correspondence(M2, M2, [[0]])
        cert = certify_morita_equivalent(Z)
        assert not cert.equivalent
        assert "faithful" in cert.reason

    def test_unital_embedding_is_not_an_equivalence(self):
        # M2 sits inside M2+M2 diagonally; the induced correspondence has
        # strictly more commutant than the right action provides
        N = MultiMatrixAlgebra((2, 2))
        src = M2
        units = []
        for (b, i, j) in src.unit_triples():
            E = np.zeros((4, 4), dtype=np.complex128)
            E[i, j] = 1.0
            E[2 + i, 2 + j] = 1.0
            units.append(E)
        std = gns_standard_form(N, trace_state(N))
        corr = corr_from_homomorphism(units, src, std)
        cert = certify_morita_equivalent(corr)
        assert not cert.equivalent


class TestConjugates:
    def test_conjugate_fusions_have_expected_ranks(self):
        H = vector_correspondence(3)
        Hbar = conjugate_correspondence(H)
        stdC = gns_standard_form(H.right_algebra, trace_state(H.right_algebra))
        stdM = gns_standard_form(H.left_algebra, trace_state(H.left_algebra))
        assert connes_fusion(H, Hbar, stdC).corr.dim == 9
        assert connes_fusion(Hbar, H, stdM).corr.dim == 1

    def test_no_unitary_between_different_ranks(self):
        H = vector_correspondence(2)
        doubled = block_correspondence(H.left_algebra, H.right_algebra, [[2]])
        assert unitary_intertwiner(H, doubled) is None

    def test_no_unitary_without_intertwiner(self):
        # two inequivalent right multiplicities of the same total dimension
        A = MultiMatrixAlgebra((1, 1))
        C = MultiMatrixAlgebra((1,))
        H = block_correspondence(A, C, [[2], [0]])
        K = block_correspondence(A, C, [[0], [2]])
        assert unitary_intertwiner(H, K) is None
