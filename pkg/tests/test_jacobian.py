import numpy as np
import pytest
import scipy.linalg

from msmacof import (
    NotDifferentiableError,
    build_b,
    build_laplacian_pair,
    d_gamma,
    d_pi,
    d_pi_gamma,
    fd_jacobian,
    pca_rotate,
    run,
    SolverConfig,
)
from msmacof.jacobian import vec

import reference_values as pv
from helpers import multiset_close, random_instance


def brute_d2rho(data, x):
    """Hessian of rho = sum w delta d_ij, pair by pair, in column-major vec layout."""
    n, p = x.shape
    h = np.zeros((n * p, n * p))
    for i in range(n):
        for j in range(i + 1, n):
            c = data.w[i, j] * data.delta[i, j]
            if c == 0:
                continue
            u = x[i] - x[j]
            d = np.linalg.norm(u)
            hu = c * (np.eye(p) - np.outer(u, u) / d**2) / d
            for s in range(p):
                for t in range(p):
                    h[s * n + i, t * n + i] += hu[s, t]
                    h[s * n + j, t * n + j] += hu[s, t]
                    h[s * n + i, t * n + j] -= hu[s, t]
                    h[s * n + j, t * n + i] -= hu[s, t]
    return h


def pencil_eigenvalues(data, x):
    """Eigenvalues of V+ D2rho from the symmetric pencil (D2rho, V) on centered
    configurations, plus p zeros for translations."""
    n, p = x.shape
    q = scipy.linalg.null_space(np.ones((1, n)))
    qq = np.kron(np.eye(p), q)
    v = build_laplacian_pair(data).v
    a = qq.T @ brute_d2rho(data, x) @ qq
    b = qq.T @ np.kron(np.eye(p), v) @ qq
    vals = scipy.linalg.eigh(0.5 * (a + a.T), 0.5 * (b + b.T), eigvals_only=True)
    return np.sort(np.concatenate([vals, np.zeros(p)]))[::-1]


def spectrum(j):
    return np.sort(np.linalg.eigvals(j.m).real)[::-1]


# d_gamma


def test_homogeneity(rng):
    data = random_instance(0, 6, 2)
    x = rng.standard_normal((6, 2))
    j = d_gamma(data, x)
    assert np.abs(j.m @ vec(x)).max() <= 1e-9


def test_translation(rng):
    data = random_instance(1, 6, 3)
    x = rng.standard_normal((6, 3))
    j = d_gamma(data, x)
    for s in range(3):
        y = np.zeros((6, 3))
        y[:, s] = 1.0
        assert np.abs(j.apply(y)).max() <= 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_dgamma_equals_vplus_times_brute_hessian(seed, rng):
    data = random_instance(seed, 5, 2, weights=True)
    x = rng.standard_normal((5, 2))
    vplus = build_laplacian_pair(data).vplus
    ref = np.kron(np.eye(2), vplus) @ brute_d2rho(data, x)
    np.testing.assert_allclose(d_gamma(data, x).m, ref, atol=1e-12)


def test_second_derivative_of_stress(rng):
    data = random_instance(4, 5, 2)
    x = rng.standard_normal((5, 2))
    lap = build_laplacian_pair(data)
    n, p = x.shape

    def grad(v):
        xx = v.reshape((n, p), order="F")
        return vec(lap.v @ xx - build_b(data, xx) @ xx)

    h = fd_jacobian(grad, None, x).m
    analytic = np.kron(np.eye(p), lap.v) @ (np.eye(n * p) - d_gamma(data, x, lap).m)
    np.testing.assert_allclose(analytic, h, rtol=0, atol=1e-8)


@pytest.mark.parametrize("seed", range(3))
def test_dgamma_spectrum_real_nonnegative(seed, rng):
    data = random_instance(seed, 6, 3, weights=True)
    x = rng.standard_normal((6, 3))
    ev = np.linalg.eigvals(d_gamma(data, x).m)
    assert np.abs(ev.imag).max() <= 1e-8
    assert ev.real.min() >= -1e-8
    assert multiset_close(ev.real, pencil_eigenvalues(data, x), 1e-9)


def test_dgamma_ekman(ekman, ekman_solution):
    j = d_gamma(ekman, ekman_solution.x)
    assert multiset_close(spectrum(j), pv.EKMAN_DGAMMA, 1e-9)


def test_dgamma_degruijter(degruijter, degruijter_solution):
    x = degruijter_solution.x
    assert multiset_close(spectrum(d_gamma(degruijter, x)), pv.DEGRUIJTER_DGAMMA, 1e-9)
    # independent route through the symmetric pencil
    assert multiset_close(pencil_eigenvalues(degruijter, x), pv.DEGRUIJTER_DGAMMA, 1e-9)


def test_rotation_eigenvectors_at_fixed_point(degruijter, degruijter_solution):
    x = degruijter_solution.x
    j = d_gamma(degruijter, x)
    a = np.array([[0, 1, -2], [-1, 0, 0.5], [2, -0.5, 0]])
    np.testing.assert_allclose(j.apply(x @ a), x @ a, atol=1e-9)


def test_dgamma_not_differentiable():
    data = random_instance(0, 4, 2)
    x = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(NotDifferentiableError, match="objects 0 and 1"):
        d_gamma(data, x)


def test_block_layout(rng):
    data = random_instance(2, 4, 2)
    x = rng.standard_normal((4, 2))
    j = d_gamma(data, x)
    lap = build_laplacian_pair(data)
    y = np.zeros((4, 2))
    y[2, 1] = 1.0
    col = fd_jacobian("gamma", data, x).m[:, 1 * 4 + 2]
    np.testing.assert_allclose(j.m[:, 6], col, atol=1e-7)
    np.testing.assert_allclose(j.block(1, 0), j.m[4:8, 0:4])
    assert lap.vplus.shape == (4, 4)


# d_pi


def _pi_fixed(rng, n, p):
    return pca_rotate(rng.standard_normal((n, p)))


def test_dpi_antisymmetric_directions_vanish(rng):
    x = _pi_fixed(rng, 6, 3)
    a = np.array([[0, 1.5, -1], [-1.5, 0, 2], [1, -2, 0]])
    np.testing.assert_allclose(d_pi(x).apply(x @ a), 0, atol=1e-9)


def test_dpi_unit_directions(rng):
    x = _pi_fixed(rng, 6, 3)
    k = x / np.linalg.norm(x, axis=0)
    lam_inv = np.diag(1 / np.linalg.norm(x, axis=0))
    j = d_pi(x)
    for mat in (np.diag([1.0, -2.0, 0.5]), np.array([[0, 1.0, 0], [-1.0, 0, 3], [0, -3, 0]])):
        y = k @ lam_inv @ mat
        np.testing.assert_allclose(j.apply(y), y, atol=1e-9)
    kperp = scipy.linalg.null_space(k.T)
    y = kperp @ rng.standard_normal((kperp.shape[1], 3))
    np.testing.assert_allclose(j.apply(y), y, atol=1e-9)


def test_dpi_spectrum_at_fixed_point(rng):
    x = _pi_fixed(rng, 5, 3)
    ev = spectrum(d_pi(x))
    np.testing.assert_allclose(ev[:-3], 1, atol=1e-9)
    np.testing.assert_allclose(ev[-3:], 0, atol=1e-9)


def test_dpi_finite_difference(rng):
    x = rng.standard_normal((5, 2))
    np.testing.assert_allclose(d_pi(x).m, fd_jacobian("pi", None, x).m, atol=1e-6)


def test_dpi_tied_singular_values():
    x = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(NotDifferentiableError):
        d_pi(x)


# d_pi_gamma


def test_dpigamma_ekman(ekman, ekman_pca_solution):
    j = d_pi_gamma(ekman, ekman_pca_solution.x)
    assert multiset_close(spectrum(j), pv.EKMAN_DPIGAMMA, 1e-9)


def test_dpigamma_degruijter(degruijter, degruijter_pca_solution):
    ev = spectrum(d_pi_gamma(degruijter, degruijter_pca_solution.x))
    assert multiset_close(ev, pv.DEGRUIJTER_DPIGAMMA, 1e-9)
    np.testing.assert_allclose(ev[:20], pv.DEGRUIJTER_DGAMMA[3:23], atol=1e-9)
    assert np.sum(np.abs(ev) <= 1e-9) == 7


@pytest.mark.parametrize("seed", range(3))
def test_dpigamma_finite_difference(seed, rng):
    data = random_instance(seed, 5, 2)
    x = rng.standard_normal((5, 2))
    np.testing.assert_allclose(d_pi_gamma(data, x).m, fd_jacobian("pi_gamma", data, x).m, atol=1e-6)


# fd_jacobian


def test_fd_linear_map(rng):
    a = rng.standard_normal((8, 8))
    j = fd_jacobian(lambda v: a @ v, None, rng.standard_normal((4, 2)))
    np.testing.assert_allclose(j.m, a, atol=1e-10)


def test_fd_gamma_matches(rng):
    data = random_instance(6, 4, 2)
    x = rng.standard_normal((4, 2))
    np.testing.assert_allclose(fd_jacobian("gamma", data, x).m, d_gamma(data, x).m, atol=1e-6)


def test_fd_pi_at_fixed_point(rng):
    x = _pi_fixed(rng, 5, 2)
    np.testing.assert_allclose(fd_jacobian("pi", None, x).m, d_pi(x).m, atol=1e-6)


def test_fd_unknown_map(rng):
    with pytest.raises(ValueError):
        fd_jacobian("sigma", None, rng.standard_normal((3, 2)))
