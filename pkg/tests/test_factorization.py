from math import prod

import numpy as np
import pytest

from qclusters.correlations import EventString, Projector, seen_correlation
from qclusters.factorization import (
    classify_homogeneity,
    find_correlation_witness,
    finest_ucd,
    finest_ucd_exhaustive,
    is_correlationally_isolated,
    is_ucd,
    seevinck_condition,
    seevinck_violation_search,
)
from qclusters.fixtures import MINUS, PLUS, ghz3, seevinck4, singlet, singlet_pair
from qclusters.linalg import kron_all
from qclusters.partitions import ClusterDecomposition, enumerate_partitions, is_coarsening
from qclusters.linalg import permute_subsystem_matrix
from qclusters.sampling import random_density_operator, random_pure_state, random_ray
from qclusters.states import DensityOperator, cluster_dims, reduced_state

CD = ClusterDecomposition.of


def random_composite(n, rng, max_cluster=3):
    """Random state assembled as a tensor product over a random partition of
    n qubits; multi-qubit factors are generically entangled."""
    indices = list(range(1, n + 1))
    rng.shuffle(indices)
    clusters = []
    while indices:
        size = int(rng.integers(1, min(max_cluster, len(indices)) + 1))
        clusters.append(sorted(indices[:size]))
        indices = indices[size:]
    layout = CD(clusters)
    factors = {}
    for c in layout.clusters:
        dims = [2] * len(c)
        if rng.random() < 0.5:
            factors[c] = random_pure_state(dims, rng).density().matrix
        else:
            factors[c] = random_density_operator(dims, rng).matrix
    concat = [i for c in layout.clusters for i in c]
    big = kron_all([factors[c] for c in layout.clusters])
    order = [concat.index(g) + 1 for g in range(1, n + 1)]
    matrix = permute_subsystem_matrix(big, [2] * n, order)
    return DensityOperator(tuple([2] * n), matrix), layout


class TestIsUcd:
    def test_pair_over_its_factors(self):
        rho = singlet_pair().density()
        ok, residual = is_ucd(rho, CD([[1, 2], [3, 4]]))
        assert ok and residual <= 1e-12

    def test_pair_over_crossing_clusters(self):
        rho = singlet_pair().density()
        ok, residual = is_ucd(rho, CD([[2, 3], [1, 4]]))
        assert not ok and residual > 0.1

    def test_trivial_always_uncorrelated(self, rng):
        rho = random_density_operator([2, 2], rng)
        ok, residual = is_ucd(rho, CD([[1, 2]]))
        assert ok and residual <= 1e-14


class TestFinest:
    def test_pair(self):
        result = finest_ucd(singlet_pair().density())
        assert str(result.decomposition) == "1,2|3,4"
        assert result.overall_residual <= result.tolerance
        assert not result.flags

    def test_seevinck_state_is_trivial(self):
        result = finest_ucd(seevinck4().density())
        assert result.decomposition == CD([[1, 2, 3, 4]])

    def test_three_independent_qubits(self, rng):
        factors = [random_density_operator([2], rng).matrix for _ in range(3)]
        rho = DensityOperator((2, 2, 2), kron_all(factors))
        result = finest_ucd(rho)
        assert result.decomposition == CD([[1], [2], [3]])
        assert result.decomposition == finest_ucd_exhaustive(rho)

    def test_split_residuals_within_tolerance(self, rng):
        rho, _ = random_composite(4, rng)
        result = finest_ucd(rho)
        assert all(r <= result.tolerance for r in result.residuals)

    def test_matches_exhaustive_on_random_suite(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 6))
            rho, _ = random_composite(n, rng)
            assert finest_ucd(rho).decomposition == finest_ucd_exhaustive(rho)

    def test_every_ucd_is_a_coarsening(self, rng):
        for _ in range(5):
            rho, _ = random_composite(4, rng)
            finest = finest_ucd(rho).decomposition
            for cd in enumerate_partitions(4):
                if is_ucd(rho, cd)[0]:
                    assert is_coarsening(finest, cd)

    def test_coarsenings_of_found_ucds_factorize(self, rng):
        rho, _ = random_composite(4, rng)
        finest = finest_ucd(rho).decomposition
        for cd in enumerate_partitions(4):
            if is_coarsening(finest, cd):
                assert is_ucd(rho, cd)[0]

    def test_induced_subcluster_decompositions_factorize(self, rng):
        for _ in range(5):
            rho, _ = random_composite(4, rng)
            finest = finest_ucd(rho).decomposition
            subset = sorted(rng.choice(range(1, 5), size=3, replace=False).tolist())
            sub_rho = reduced_state(rho, subset)
            relabel = {g: k + 1 for k, g in enumerate(subset)}
            induced = [
                [relabel[i] for i in c if i in relabel]
                for c in finest.clusters
                if any(i in relabel for i in c)
            ]
            assert is_ucd(sub_rho, CD(induced))[0]

    def test_oracle_trivial_for_entangled_pair(self):
        assert finest_ucd_exhaustive(singlet().density()) == CD([[1, 2]])

    def test_mixed_dims_nonadjacent_cluster(self, rng):
        # entangled pair on subsystems (1,3), qutrit alone on 2
        sigma = random_pure_state([2, 2], rng).density().matrix
        tau = random_density_operator([3], rng).matrix
        m = permute_subsystem_matrix(kron_all([sigma, tau]), [2, 2, 3], [1, 3, 2])
        rho = DensityOperator((2, 3, 2), m)
        result = finest_ucd(rho)
        assert str(result.decomposition) == "1,3|2"
        assert result.decomposition == finest_ucd_exhaustive(rho)

    def test_near_threshold_perturbation_is_flagged(self, rng):
        a = random_density_operator([2], rng).matrix
        b = random_density_operator([2], rng).matrix
        # traceless-factor perturbation leaves both marginals unchanged, so
        # the split residual is exactly its norm; park it just above tol
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        tol = 1e-9 * 4
        eta = 1.5 * tol / 2.0
        rho = DensityOperator((2, 2), np.kron(a, b) + eta * np.kron(sx, sx))
        result = finest_ucd(rho)
        assert result.decomposition == CD([[1, 2]])
        assert result.flags


class TestHomogeneity:
    def test_pair_factor_is_homogeneous(self):
        rho = singlet_pair().density()
        assert classify_homogeneity(rho, [1, 2]) == "homogeneous"

    def test_whole_pair_is_heterogeneous(self):
        rho = singlet_pair().density()
        assert classify_homogeneity(rho, [1, 2, 3, 4]) == "heterogeneous"

    def test_seevinck_whole_is_homogeneous(self):
        rho = seevinck4().density()
        assert classify_homogeneity(rho, [1, 2, 3, 4]) == "homogeneous"


class TestCorrelationalIsolation:
    def test_explicit_product_is_isolated(self, rng):
        env = random_density_operator([2], rng)
        rho = DensityOperator((2, 2, 2), np.kron(singlet().density().matrix, env.matrix))
        assert is_correlationally_isolated(rho, [1, 2])

    def test_ghz_cluster_not_isolated(self):
        assert not is_correlationally_isolated(ghz3().density(), [1, 2])

    def test_subsystem_inheritance(self, rng):
        env = random_density_operator([2], rng)
        rho = DensityOperator((2, 2, 2), np.kron(singlet().density().matrix, env.matrix))
        # isolation of {1,2} from subsystem 3 carries down to {1} alone:
        # trace out 2 and test the bipartition {1}|{3}
        rho_13 = reduced_state(rho, [1, 3])
        assert is_correlationally_isolated(rho_13, [1])


class TestStringCorrelationEquivalence:
    def test_uncorrelated_decomposition_sees_nothing(self, rng):
        rho, _ = random_composite(4, rng)
        finest = finest_ucd(rho).decomposition
        for _ in range(100):
            entries = tuple(
                Projector.ray(random_ray(prod(cluster_dims(rho.dims, c)), rng))
                for c in finest.clusters
            )
            s = EventString.of(finest, entries)
            assert seen_correlation(rho, s).seen <= 1e-8

    def test_correlated_decomposition_has_witness(self, rng):
        rho = singlet_pair().density()
        witness = find_correlation_witness(rho, CD([[2, 3], [1, 4]]), seed=rng)
        assert witness is not None
        assert seen_correlation(rho, witness).seen > 1e-4

    def test_entangled_pair_maximal_split_has_witness(self):
        rho = singlet().density()
        witness = find_correlation_witness(rho, CD([[1], [2]]), seed=3)
        assert witness is not None

    def test_no_witness_on_product_split(self, rng):
        a = random_density_operator([2], rng)
        b = random_density_operator([2], rng)
        rho = DensityOperator((2, 2), np.kron(a.matrix, b.matrix))
        assert find_correlation_witness(rho, CD([[1], [2]]), seed=1, budget=300) is None


class TestSeevinckCondition:
    def test_holds_on_product_of_pairs(self, rng):
        rho = singlet_pair().density()
        groups = CD([[1, 2], [3, 4]])
        for _ in range(50):
            projs = [Projector.ray(random_ray(2, rng)) for _ in range(4)]
            check = seevinck_condition(rho, groups, projs)
            assert check.holds, f"gap {check.gap}"

    def test_alternating_spin_state_explicit_witness(self):
        """Up/down projectors on the alternating four-qubit superposition:
        the coincidence is 1/2 but the group marginals each give 1/2."""
        rho = seevinck4().density()
        groups = CD([[1, 2], [3, 4]])
        projs = [Projector.ray(v) for v in (PLUS, MINUS, PLUS, MINUS)]
        check = seevinck_condition(rho, groups, projs)
        assert abs(check.lhs - 0.5) < 1e-12
        assert abs(check.rhs - 0.25) < 1e-12
        assert not check.holds

    def test_all_identity_trivially_holds(self, rng):
        rho = random_density_operator([2, 2, 2, 2], rng)
        projs = [Projector.identity(2)] * 4
        check = seevinck_condition(rho, CD([[1, 2], [3, 4]]), projs)
        assert check.holds and abs(check.lhs - 1.0) < 1e-10 and abs(check.rhs - 1.0) < 1e-10

    def test_search_finds_violation(self):
        result = seevinck_violation_search(
            seevinck4().density(), CD([[1, 2], [3, 4]]), seed=11, budget=500
        )
        assert result.witness is not None
        assert result.max_gap > 1e-3
