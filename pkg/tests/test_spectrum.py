import math

import numpy as np
import pytest

from msmacof import (
    DissimilarityData,
    FixedPointError,
    IterationTrace,
    StressDecomposition,
    analyze_jacobian,
    build_laplacian_pair,
    d_gamma,
    d_pi_gamma,
    distance_matrix,
    empirical_rates,
    normalize,
    vplus_b_spectrum,
)
from msmacof.jacobian import JacobianMatrix
from msmacof.spectrum import classify

import reference_values as pv
from helpers import multiset_close, random_instance


def test_analyze_ekman(ekman, ekman_solution):
    rep = analyze_jacobian(d_gamma(ekman, ekman_solution.x), 2)
    assert (rep.n_unit, rep.n_zero) == (1, 3)
    assert rep.kappa == pytest.approx(pv.EKMAN_KAPPA, abs=1e-10)
    assert rep.classification == "attracting-minimum"
    assert multiset_close(rep.eigenvalues, pv.EKMAN_DGAMMA, 1e-8)


def test_analyze_degruijter(degruijter, degruijter_solution):
    rep = analyze_jacobian(d_gamma(degruijter, degruijter_solution.x), 3)
    assert (rep.n_unit, rep.n_zero) == (3, 4)
    assert rep.kappa == pytest.approx(pv.DEGRUIJTER_KAPPA, abs=1e-10)
    assert np.all(np.diff(rep.eigenvalues) <= 0)


def test_analyze_degruijter_pca(degruijter, degruijter_pca_solution):
    rep = analyze_jacobian(d_pi_gamma(degruijter, degruijter_pca_solution.x), 3)
    assert (rep.n_unit, rep.n_zero) == (0, 7)
    assert rep.kappa == pytest.approx(pv.DEGRUIJTER_KAPPA, abs=1e-10)


def test_analyze_rejects_non_fixed_point(rng):
    data = random_instance(0, 5, 3)
    with pytest.raises(FixedPointError):
        analyze_jacobian(d_gamma(data, rng.standard_normal((5, 3))), 3)


def test_classification_bands():
    assert classify(0.5) == "attracting-minimum"
    assert classify(1.0) == "indeterminate"
    assert classify(1 + 1e-9) == "indeterminate"
    assert classify(1.2) == "saddle-or-repulsing"


def test_saddle_detected():
    # a 1-d fixed point embedded in 2-d: the zero column makes it a saddle
    m = np.diag([1.3, 1.0, 0.4, 0.0])
    rep = analyze_jacobian(JacobianMatrix(m=m, kind="dGamma", n=2, p=2), 2)
    assert rep.kappa == pytest.approx(1.3)
    assert rep.classification == "saddle-or-repulsing"


def test_vplus_b_ekman(ekman, ekman_lap, ekman_solution):
    cert = vplus_b_spectrum(ekman, ekman_lap, ekman_solution.x)
    assert cert.certified
    np.testing.assert_allclose(cert.eigenvalues, pv.EKMAN_VPLUS_B, atol=1e-8)


def test_vplus_b_degruijter(degruijter, degruijter_lap, degruijter_solution):
    cert = vplus_b_spectrum(degruijter, degruijter_lap, degruijter_solution.x)
    assert not cert.certified
    np.testing.assert_allclose(cert.eigenvalues, pv.DEGRUIJTER_VPLUS_B, atol=1e-8)
    assert cert.n_unit >= 3


def test_vplus_b_perfect_fit(rng):
    x = rng.standard_normal((6, 2))
    x -= x.mean(axis=0)
    data = normalize(DissimilarityData.from_delta(distance_matrix(x)))
    x = x * data.delta[0, 1] / distance_matrix(x)[0, 1]
    cert = vplus_b_spectrum(data, build_laplacian_pair(data), x)
    assert cert.certified
    np.testing.assert_allclose(cert.eigenvalues[:-1], 1, atol=1e-10)
    assert abs(cert.eigenvalues[-1]) <= 1e-10


def _geometric_trace(n, ratio=0.5):
    tr = IterationTrace(initial=StressDecomposition(1.0, 0.0, 0.0))
    eold = math.inf
    for k in range(1, n + 1):
        e = ratio**k
        tr.append(StressDecomposition(0.0, 0.0, 0.0), e, e ** (1 / k), e / eold if k > 1 else math.nan)
        eold = e
    return tr


def test_rates_geometric():
    rates = empirical_rates(_geometric_trace(40))
    for v in (rates.r_final, rates.q_final, rates.q_liminf, rates.r_limsup):
        assert v == pytest.approx(0.5, abs=1e-9)
    assert rates.window == 20


def test_rates_window_short():
    assert empirical_rates(_geometric_trace(6)).window == 3


def test_rates_need_two_iterations():
    with pytest.raises(ValueError):
        empirical_rates(_geometric_trace(1))


def test_rates_degruijter_sane(degruijter_solution):
    rates = empirical_rates(degruijter_solution.trace)
    assert rates.q_final >= pv.DEGRUIJTER_KAPPA - 0.1
    assert rates.q_liminf <= rates.r_limsup + 0.1


def test_rates_ekman_sane(ekman_solution):
    rates = empirical_rates(ekman_solution.trace)
    assert rates.q_final >= pv.EKMAN_KAPPA - 0.1
    assert rates.r_final == ekman_solution.r


@pytest.mark.parametrize("seed", range(3))
def test_spectra_match_after_trivial_swap(seed):
    from msmacof import SolverConfig, run, pca_rotate

    data = random_instance(seed, 7, 2, noise=0.2)
    res = run(data, SolverConfig(p=2, eps=1e-13))
    g = analyze_jacobian(d_gamma(data, res.x), 2)
    pg = analyze_jacobian(d_pi_gamma(data, pca_rotate(res.x)), 2)
    a = np.sort(g.eigenvalues)
    near = np.argsort(np.abs(g.eigenvalues - 1))[:1]
    swapped = np.concatenate([np.delete(g.eigenvalues, near), [0.0]])
    assert multiset_close(swapped, pg.eigenvalues, 1e-8)
    assert pg.kappa == pytest.approx(g.kappa, abs=1e-8)
    assert a.size == 14
