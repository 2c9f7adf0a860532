import itertools

import numpy as np
import pytest

from qclusters.fixtures import singlet
from qclusters.linalg import ValidationError
from qclusters.sampling import haar_unitary, random_density_operator, random_hermitian
from qclusters.tomography import (
    build_probe_basis,
    dyad_as_projectors,
    gram_linear_independence_check,
    independence_by_expansion_matrix,
    independence_by_null_combination,
    probe_probabilities,
    product_probe_set,
    reconstruct,
    required_probe_count,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


class TestProbeCount:
    def test_two_qubits(self):
        assert required_probe_count([2, 2]).state_parameters == 15

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_single_space(self, m):
        report = required_probe_count([m])
        assert report.state_parameters == m**2 - 1
        assert report.per_subsystem_nontrivial == (m**2 - 1,)

    def test_qubit_qutrit(self):
        assert required_probe_count([2, 3]).state_parameters == 35

    def test_rejects_trivial_subsystem(self):
        with pytest.raises(ValidationError, match="dims-minimum"):
            required_probe_count([2, 1])


class TestDyadDecomposition:
    def test_two_dim_hand_expansion(self):
        dec = dyad_as_projectors(0, 1, 2)
        target = np.array([[0, 1], [0, 0]], dtype=complex)
        np.testing.assert_allclose(dec.assemble(), target, atol=1e-15)
        assert dec.coefficients == (1.0 + 0j, -1.0j, (1j - 1) / 2, (1j - 1) / 2)

    def test_adjoint_path(self):
        dec = dyad_as_projectors(1, 0, 2)
        target = np.array([[0, 0], [1, 0]], dtype=complex)
        np.testing.assert_allclose(dec.assemble(), target, atol=1e-15)

    @pytest.mark.parametrize("dim", [2, 3, 4, 5])
    def test_all_pairs_exact(self, dim):
        for m, mp in itertools.permutations(range(dim), 2):
            target = np.zeros((dim, dim), dtype=complex)
            target[m, mp] = 1.0
            residual = np.max(np.abs(dyad_as_projectors(m, mp, dim).assemble() - target))
            assert residual <= 1e-12

    def test_rejects_diagonal(self):
        with pytest.raises(ValidationError, match="dyad-offdiagonal"):
            dyad_as_projectors(1, 1, 3)


class TestProbeBasis:
    def test_two_dim_count_and_det(self):
        basis = build_probe_basis(2)
        assert len(basis.projectors) == 4
        # Gram by row reduction: det [[1,0,.5,.5],[0,1,.5,.5],[.5,.5,1,.5],[.5,.5,.5,1]] = 1/4
        assert abs(basis.gram_det - 0.25) < 1e-12

    def test_three_dim_count(self):
        assert len(build_probe_basis(3).projectors) == 9

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_all_rank_one(self, dim):
        assert all(p.rank == 1 for p in build_probe_basis(dim).projectors)

    def test_gram_matches_direct_traces(self):
        basis = build_probe_basis(3)
        direct = np.array(
            [
                [np.real(np.trace(p.matrix @ q.matrix)) for q in basis.projectors]
                for p in basis.projectors
            ]
        )
        np.testing.assert_allclose(basis.gram, direct, atol=1e-12)
        assert abs(basis.gram_det - np.linalg.det(direct)) < 1e-10


class TestProductProbes:
    @pytest.mark.parametrize(
        "dims,count", [([2], 4), ([2, 2], 16), ([2, 2, 2], 64), ([2, 3], 36)]
    )
    def test_counts(self, dims, count):
        assert len(product_probe_set(dims)) == count

    @pytest.mark.parametrize("dims", [[2], [2, 2], [2, 3], [2, 2, 2]])
    def test_count_identity(self, dims):
        assert len(product_probe_set(dims)) - 1 == required_probe_count(dims).state_parameters


class TestReconstruction:
    def test_singlet_round_trip(self):
        rho = singlet().density()
        probes = product_probe_set([2, 2])
        rec = reconstruct(probe_probabilities(rho, probes), probes, [2, 2])
        assert np.linalg.norm(rec.matrix - rho.matrix) <= 1e-8
        assert rec.flags == ()

    def test_random_low_rank_round_trip(self, rng):
        rho = random_density_operator([2, 3], rng, rank=3)
        probes = product_probe_set([2, 3])
        rec = reconstruct(probe_probabilities(rho, probes), probes, [2, 3])
        assert np.linalg.norm(rec.matrix - rho.matrix) <= 1e-8

    def test_maximally_mixed(self):
        from qclusters.states import DensityOperator

        rho = DensityOperator.maximally_mixed((2, 2))
        probes = product_probe_set([2, 2])
        rec = reconstruct(probe_probabilities(rho, probes), probes, [2, 2])
        assert np.linalg.norm(rec.matrix - np.eye(4) / 4) <= 1e-10

    def test_single_space_basis_input(self, rng):
        basis = build_probe_basis(3)
        rho = random_density_operator([3], rng)
        rec = reconstruct(probe_probabilities(rho, basis), basis, [3])
        assert np.linalg.norm(rec.matrix - rho.matrix) <= 1e-9

    def test_noisy_probabilities_flagged_not_repaired(self, rng):
        rho = singlet().density()
        probes = product_probe_set([2, 2])
        probs = probe_probabilities(rho, probes)
        noisy = probs + rng.normal(0, 1e-3, probs.shape)
        rec = reconstruct(noisy, probes, [2, 2], noise_tol=1e-8)
        assert rec.flags  # at least positivity or trace must trip at this noise
        with pytest.raises(ValidationError):
            rec.as_density_operator()

    def test_singular_probe_family_rejected(self):
        basis = build_probe_basis(2)
        dup = list(basis.projectors[:3]) + [basis.projectors[0]]
        from qclusters.correlations import EventString
        from qclusters.partitions import ClusterDecomposition

        cd = ClusterDecomposition.of([[1]])
        probes = [EventString.of(cd, (p,)) for p in dup]
        with pytest.raises(ValidationError, match="gram-nonsingular"):
            reconstruct(np.zeros(4), probes, [2])


class TestIndependenceCriteria:
    def test_pauli_family_independent(self):
        ops = [np.eye(2, dtype=complex), SX, SY, SZ]
        ok, det = gram_linear_independence_check(ops)
        assert ok
        # pairwise trace-orthogonal with tr(P^2)=2, so the Gram is 2*I
        assert abs(det - 16.0) < 1e-10

    def test_duplicate_is_dependent(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        ok, det = gram_linear_independence_check([p, p])
        assert not ok
        assert abs(det) < 1e-15

    def test_probe_basis_independent(self):
        basis = build_probe_basis(2)
        ok, _ = gram_linear_independence_check([p.matrix for p in basis.projectors])
        assert ok

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_criteria_agree_on_random_families(self, dim, rng):
        for trial in range(10):
            ops = [random_hermitian(dim, rng) for _ in range(dim**2)]
            if trial % 3 == 1:
                ops[-1] = 0.5 * ops[0] - 2.0 * ops[1]  # engineered dependence
            if trial % 3 == 2:
                ops[2] = ops[1].copy()
            got = {
                independence_by_null_combination(ops),
                independence_by_expansion_matrix(ops)[0],
                gram_linear_independence_check(ops)[0],
            }
            assert len(got) == 1

    def test_gram_det_is_expansion_det_squared(self, rng):
        ops = [random_hermitian(2, rng) for _ in range(4)]
        _, gram_det = gram_linear_independence_check(ops)
        _, alpha_det = independence_by_expansion_matrix(ops)
        assert abs(gram_det - alpha_det**2) < 1e-8 * max(1.0, abs(gram_det))
