import numpy as np
import pytest

from koflow import clifford as cl
from koflow.abs_index import abs_class
from koflow.errors import ValidationError
from koflow.flow import classical_sf, endpoint_flow, spectral_flow
from koflow.models import (CMat, LatticeSpec, RealStructure, aii_path,
                           flux_path, hermitian_double, kitaev_path, realify,
                           standard_quaternionic)


def test_cmat_arithmetic():
    a = CMat(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2))
    b = a.h()
    prod = a @ b
    direct = (a.re + 1j * a.im) @ (b.re + 1j * b.im)
    assert np.allclose(prod.re + 1j * prod.im, direct)
    assert np.allclose(a.times_i().re, -a.im)
    k = a.kron(b)
    directk = np.kron(a.re + 1j * a.im, b.re + 1j * b.im)
    assert np.allclose(k.re + 1j * k.im, directk)


def test_realify_examples():
    rs = RealStructure(2, np.eye(2))
    i_sigma_y = CMat(np.array([[0.0, 1.0], [-1.0, 0.0]]), np.zeros((2, 2)))
    assert np.allclose(realify(rs, i_sigma_y), [[0.0, 1.0], [-1.0, 0.0]])
    assert np.allclose(realify(rs, CMat.eye(2)), np.eye(2))
    i_sigma_x = CMat(np.zeros((2, 2)), np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValidationError):
        realify(rs, i_sigma_x)


def test_realify_is_algebra_map():
    rng = np.random.default_rng(2)
    m = np.kron(np.eye(3), cl.K2)
    rs = RealStructure(6, m)

    def random_commuting():
        raw = CMat(rng.standard_normal((6, 6)), rng.standard_normal((6, 6)))
        mr = CMat.real(m)
        return raw + mr @ raw.conj() @ mr  # averaged onto the commutant of C

    a, b = random_commuting(), random_commuting()
    assert np.allclose(realify(rs, a @ b), realify(rs, a) @ realify(rs, b),
                       atol=1e-10)


def test_kitaev_endpoint_spectra():
    for n_ring in (3, 8):
        path = kitaev_path(LatticeSpec(n_ring))
        for t_end in (0.0, 1.0):
            svals = np.linalg.svd(path.at(t_end), compute_uv=False)
            assert np.allclose(svals, 1.0, atol=1e-12)


def test_kitaev_alpha_one_is_flipped_bond():
    # alpha = 1 equals the chain with the (0,1) bond block negated
    from koflow.models import _B_BLOCK, _bond_correction
    total = _B_BLOCK + _bond_correction(1.0)
    assert np.allclose(total.re, -_B_BLOCK.re) and np.allclose(total.im, -_B_BLOCK.im)
    zero = _bond_correction(0.0)
    assert np.allclose(zero.re, 0.0) and np.allclose(zero.im, 0.0)


@pytest.mark.parametrize("n_ring", list(range(3, 17)))
def test_kitaev_flow_is_one(n_ring):
    path = kitaev_path(LatticeSpec(n_ring))
    value = spectral_flow(path)
    assert (value.degree, value.value) == (2, 1)
    assert endpoint_flow(path) == value


def test_kitaev_rejects_other_couplings():
    with pytest.raises(ValidationError):
        kitaev_path(LatticeSpec(8, mu=0.5))
    with pytest.raises(ValidationError):
        LatticeSpec(2)


@pytest.mark.parametrize("r,sp", [(0, 1), (0, 2), (1, 1), (2, 1), (0, 3),
                                  (1, 2), (2, 2), (3, 1), (0, 4), (1, 3),
                                  (4, 1), (3, 2), (2, 3), (1, 4), (0, 5)])
def test_flux_path_reproduces_class(r, sp):
    chis = ["+", "-"] if cl.has_two_irreducibles(r, sp) else [None]
    for ch in chis:
        module = cl.irreducible_rep(r, sp, ch)
        path = flux_path(module, 3)
        assert spectral_flow(path) == abs_class(module)


def test_flux_double_module_vanishes_mod2():
    module = cl.irreducible_rep(0, 1)
    double = cl.direct_sum(module, module)
    assert spectral_flow(flux_path(double, 3)).value == 0


def test_flux_independent_of_ring_length():
    module = cl.irreducible_rep(0, 3, "+")
    values = {n_ring: spectral_flow(flux_path(module, n_ring)).value
              for n_ring in (3, 5, 8)}
    assert set(values.values()) == {1}


def test_aii_quarter_relation():
    cases = [
        (lambda t: CMat.real((2 * t - 1.0) * np.eye(4)), 4, 8),
        (lambda t: CMat.real(np.eye(4)), 4, 0),
        (lambda t: CMat.real(np.kron(np.eye(2),
                                     np.diag([2 * t - 1.0, 2 * t - 1.0, 1.0, 1.0]))), 8, 8),
    ]
    for h_fn, n, expected_classical in cases:
        path = aii_path(h_fn, n)
        value = spectral_flow(path)
        classical = classical_sf(lambda t: hermitian_double(h_fn(t)))
        assert classical == expected_classical
        assert value.degree == 4
        assert 4 * value.value == classical


def test_aii_kernel_dims_divisible_by_four():
    h_fn = (lambda t: CMat.real((2 * t - 1.0) * np.eye(4)))
    path = aii_path(h_fn, 4)
    svals = np.linalg.svd(path.at(0.5), compute_uv=False)
    kdim = int(np.sum(svals < 1e-10))
    assert kdim > 0 and kdim % 4 == 0


def test_aii_rejects_symmetry_violations():
    # breaks [h, T] = 0 for the standard quaternionic structure
    bad = lambda t: CMat.real(np.diag([1.0, 1.0, 1.0, -1.0]))
    path = aii_path(bad, 4)
    with pytest.raises(ValidationError):
        path.at(0.0)


def test_standard_quaternionic_squares_to_minus_one():
    jq = standard_quaternionic(6)
    t_sq = jq @ jq.conj()
    assert np.allclose(t_sq.re, -np.eye(6)) and np.allclose(t_sq.im, 0.0)
    with pytest.raises(ValidationError):
        standard_quaternionic(3)
