import numpy as np
import pytest

from koflow.errors import AmbiguousKernelError
from koflow.numerics import (kernel_basis, min_singular_value, op_norm,
                             polar_orthogonal, random_orthogonal, skew_phase,
                             split_zero_cluster)


def test_split_zero_cluster_basics():
    assert split_zero_cluster(np.array([])) == 0
    assert split_zero_cluster(np.zeros(4)) == 4
    assert split_zero_cluster(np.array([1e-14, 1e-14, 1.0, 2.0])) == 2
    assert split_zero_cluster(np.array([0.5, 1.0, 2.0])) == 0


def test_split_zero_cluster_absorbs_noise_chain():
    # an exact kernel often lands as a noise cluster straddling the raw
    # relative threshold; the chain must absorb it
    values = np.array([0.0, 0.0, 2.05e-8, 4.7e-8, 2.0, 2.0])
    assert split_zero_cluster(values) == 4


def test_split_zero_cluster_ambiguous_ramp():
    ramp = np.array([1e-8 * 10 ** k for k in range(8)] + [2.0])
    with pytest.raises(AmbiguousKernelError):
        split_zero_cluster(ramp)


def test_split_zero_cluster_gap_guard():
    values = np.array([1e-9, 5e-8, 2.0])
    # 5e-8 sits within a factor 10^2 of 1e-9 < 10^3 guard after chaining
    kdim = split_zero_cluster(values)
    assert kdim == 2  # chained into one cluster, clean gap to 2.0


def test_skew_phase():
    t_mat = 3.0 * np.kron(np.eye(2), np.array([[0.0, -1.0], [1.0, 0.0]]))
    phase = skew_phase(t_mat)
    assert np.allclose(phase @ phase, -np.eye(4))
    assert np.allclose(phase + phase.T, 0.0)
    padded = np.zeros((6, 6))
    padded[:4, :4] = t_mat
    partial = skew_phase(padded, kernel_dim=2)
    assert np.allclose(partial[4:, 4:], 0.0)
    assert np.allclose(partial[:4, :4] @ partial[:4, :4], -np.eye(4))


def test_polar_and_random_orthogonal():
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((5, 5))
    u = polar_orthogonal(mat)
    assert np.allclose(u.T @ u, np.eye(5), atol=1e-12)
    q = random_orthogonal(rng, 7)
    assert np.allclose(q.T @ q, np.eye(7), atol=1e-12)


def test_kernel_basis_and_norms():
    mat = np.diag([0.0, 0.0, 1.0, 3.0])
    basis = kernel_basis(mat)
    assert basis.shape == (4, 2)
    assert np.allclose(mat @ basis, 0.0)
    assert op_norm(mat) == 3.0
    assert min_singular_value(np.diag([2.0, 5.0])) == 2.0
    assert min_singular_value(np.zeros((0, 0))) == np.inf
