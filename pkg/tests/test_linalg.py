import numpy as np
import pytest

from qclusters.linalg import (
    ValidationError,
    adjoint,
    embed_operator,
    frobenius_distance,
    hermitian_eig,
    kron,
    kron_all,
    matrix_sqrt_psd,
    partial_trace,
    permute_subsystem_matrix,
    trace_of,
)
from qclusters.sampling import random_density_operator, random_hermitian

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
PLUS_PROJ = np.full((2, 2), 0.5, dtype=complex)
MINUS_PROJ = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def kron_oracle(a, b):
    """Direct-multiplication Kronecker product."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_trace_oracle(m, dims, keep):
    """Sum over computational-basis blocks of the discarded factors."""
    n = len(dims)
    keep0 = sorted(k - 1 for k in keep)
    drop = [i for i in range(n) if i not in keep0]
    t = m.reshape(tuple(dims) * 2)
    d_keep = int(np.prod([dims[i] for i in keep0])) if keep0 else 1
    out = np.zeros((d_keep, d_keep), dtype=complex)
    kept_shapes = [dims[i] for i in keep0]
    for row in np.ndindex(*kept_shapes):
        for col in np.ndindex(*kept_shapes):
            total = 0.0 + 0.0j
            for diag in np.ndindex(*[dims[i] for i in drop]):
                idx_row = [0] * n
                idx_col = [0] * n
                for pos, i in enumerate(keep0):
                    idx_row[i] = row[pos]
                    idx_col[i] = col[pos]
                for pos, i in enumerate(drop):
                    idx_row[i] = diag[pos]
                    idx_col[i] = diag[pos]
                total += t[tuple(idx_row) + tuple(idx_col)]
            r = int(np.ravel_multi_index(row, kept_shapes)) if keep0 else 0
            c = int(np.ravel_multi_index(col, kept_shapes)) if keep0 else 0
            out[r, c] = total
    return out


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(I2, I2), np.eye(4))

    def test_basis_dyad(self):
        d = np.array([[0, 1], [0, 0]], dtype=complex)
        out = kron(d, I2)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 2] = expected[1, 3] = 1
        np.testing.assert_array_equal(out, expected)

    def test_projector_product_trace(self):
        out = kron(PLUS_PROJ, MINUS_PROJ)
        assert abs(trace_of(out) - 1.0) < 1e-14
        np.testing.assert_allclose(out, kron_oracle(PLUS_PROJ, MINUS_PROJ), atol=1e-15)

    def test_associative_bilinear(self, rng):
        a, b, c = (random_hermitian(2, rng) for _ in range(3))
        np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)
        np.testing.assert_allclose(kron(2 * a + b, c), 2 * kron(a, c) + kron(b, c), atol=1e-12)

    def test_trace_multiplicative(self, rng):
        for _ in range(5):
            a = random_hermitian(3, rng)
            b = random_hermitian(2, rng)
            np.testing.assert_allclose(trace_of(kron(a, b)), trace_of(a) * trace_of(b), atol=1e-12)

    def test_kron_all(self):
        np.testing.assert_array_equal(kron_all([I2, I2, I2]), np.eye(8))


class TestPartialTrace:
    def test_singlet_marginal(self):
        rho = np.outer(SINGLET, SINGLET.conj())
        np.testing.assert_allclose(partial_trace(rho, [2, 2], [1]), I2 / 2, atol=1e-14)
        np.testing.assert_allclose(
            partial_trace(rho, [2, 2], [1]), partial_trace_oracle(rho, [2, 2], [1]), atol=1e-14
        )

    def test_product_factorization(self, rng):
        a = random_hermitian(2, rng)
        b = random_hermitian(3, rng)
        np.testing.assert_allclose(
            partial_trace(kron(a, b), [2, 3], [1]), a * np.trace(b), atol=1e-12
        )
        np.testing.assert_allclose(
            partial_trace(kron(a, b), [2, 3], [2]), b * np.trace(a), atol=1e-12
        )

    def test_keep_all(self, rng):
        m = random_hermitian(6, rng)
        np.testing.assert_array_equal(partial_trace(m, [2, 3], [1, 2]), m)

    def test_trace_preserved(self, rng):
        m = random_hermitian(12, rng)
        for keep in ([1], [2], [3], [1, 3], [2, 3]):
            np.testing.assert_allclose(
                np.trace(partial_trace(m, [2, 3, 2], keep)), np.trace(m), atol=1e-12
            )

    def test_matches_oracle(self, rng):
        m = (rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12)))
        for keep in ([1], [3], [1, 2], [2, 3]):
            np.testing.assert_allclose(
                partial_trace(m, [2, 3, 2], keep),
                partial_trace_oracle(m, [2, 3, 2], keep),
                atol=1e-12,
            )

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="dims-product"):
            partial_trace(np.eye(5), [2, 2], [1])


class TestHermitianEig:
    def test_identity(self):
        sys = hermitian_eig(I2)
        np.testing.assert_allclose(sys.eigenvalues, [1, 1])

    def test_fourfold_quarter(self):
        sys = hermitian_eig(np.eye(4) / 4)
        np.testing.assert_allclose(sys.eigenvalues, [0.25] * 4)

    def test_sigma_x(self):
        # characteristic polynomial x^2 - 1 by hand
        sys = hermitian_eig(SX)
        np.testing.assert_allclose(sys.eigenvalues, [-1, 1], atol=1e-14)

    def test_random_reconstruction(self, rng):
        for dim in (2, 5, 9):
            h = random_hermitian(dim, rng)
            sys = hermitian_eig(h)
            recon = (sys.eigenvectors * sys.eigenvalues) @ sys.eigenvectors.conj().T
            scale = max(1.0, np.linalg.norm(h))
            assert np.linalg.norm(h - recon) <= 1e-10 * scale
            assert np.max(np.abs(sys.eigenvectors.conj().T @ sys.eigenvectors - np.eye(dim))) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="hermiticity"):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestMatrixSqrt:
    def test_scaled_identity(self):
        np.testing.assert_allclose(matrix_sqrt_psd(I2 / 2), I2 / np.sqrt(2), atol=1e-14)

    def test_projector_fixed_point(self):
        np.testing.assert_allclose(matrix_sqrt_psd(PLUS_PROJ), PLUS_PROJ, atol=1e-12)

    def test_diagonal(self):
        np.testing.assert_allclose(matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-12)

    def test_squares_back(self, rng):
        for dim in (2, 7, 16):
            rho = random_density_operator([dim], rng).matrix
            s = matrix_sqrt_psd(rho)
            assert np.linalg.norm(s @ s - rho) <= 1e-9

    def test_rejects_negative(self):
        with pytest.raises(ValidationError, match="positive-semidefinite"):
            matrix_sqrt_psd(np.diag([1.0, -1e-6]))


class TestSmallOps:
    def test_trace_identity(self):
        assert trace_of(np.eye(4)) == 4

    def test_distance_zero(self, rng):
        a = random_hermitian(3, rng)
        assert frobenius_distance(a, a) == 0.0

    def test_distance_shape_mismatch(self):
        with pytest.raises(ValidationError, match="matrix-shape"):
            frobenius_distance(np.eye(2), np.eye(3))

    def test_adjoint_of_dyad(self):
        d01 = np.array([[0, 1], [0, 0]], dtype=complex)
        d10 = np.array([[0, 0], [1, 0]], dtype=complex)
        np.testing.assert_array_equal(adjoint(d01), d10)


class TestPermuteEmbed:
    def test_permute_swaps_factors(self, rng):
        a = random_hermitian(2, rng)
        b = random_hermitian(3, rng)
        swapped = permute_subsystem_matrix(kron(a, b), [2, 3], [2, 1])
        np.testing.assert_allclose(swapped, kron(b, a), atol=1e-12)

    def test_embed_adjacent(self, rng):
        op = random_hermitian(3, rng)
        np.testing.assert_allclose(
            embed_operator(op, [2, 3], [2]), kron(I2, op), atol=1e-14
        )

    def test_embed_nonadjacent(self, rng):
        a = random_hermitian(2, rng)
        c = random_hermitian(2, rng)
        got = embed_operator(kron(a, c), [2, 3, 2], [1, 3])
        ref = embed_operator(a, [2, 3, 2], [1]) @ embed_operator(c, [2, 3, 2], [3])
        np.testing.assert_allclose(got, ref, atol=1e-12)

    def test_embed_dimension_error(self):
        with pytest.raises(ValidationError, match="operator-dim"):
            embed_operator(np.eye(3), [2, 2], [1])
