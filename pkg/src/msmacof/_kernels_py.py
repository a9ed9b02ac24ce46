"""Pure numpy versions of the inner-loop kernels.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and semantics. Keep them in step.
"""
import numpy as np


def _rowsum(a):
    # left-to-right in extended precision along the last axis, matching the
    # compiled loops bit for bit
    return np.cumsum(a.astype(np.longdouble), axis=-1)[..., -1].astype(np.float64)


def distance_stats(x, w, delta):
    """Pairwise distances of the rows of `x` plus the three pair sums.

    Returns
    -------
    d : (n, n) ndarray
    sigma, rho, eta2 : float
        ``1/2 sum w (delta - d)^2``, ``sum w delta d`` and ``sum w d^2``,
        all over pairs ``i < j``.
    """
    x = np.asarray(x, dtype=np.float64)
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt(np.sum(diff * diff, axis=-1))
    iu = np.triu_indices(x.shape[0], 1)
    wu, du, eu = w[iu], d[iu], delta[iu]
    res = eu - du
    sigma = 0.5 * float(np.sum(wu * res * res))
    rho = float(np.sum(wu * eu * du))
    eta2 = float(np.sum(wu * du * du))
    return d, sigma, rho, eta2


def b_matrix(wdelta, d):
    """B(X) from ``w * delta`` and current distances.

    Pairs at zero distance contribute nothing. Returns ``(b, dropped)`` where
    `dropped` counts pairs ``i < j`` with zero distance and ``w*delta > 0``.
    """
    pos = d > 0
    b = np.zeros_like(d)
    np.divide(-wdelta, d, out=b, where=pos)
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -_rowsum(b))
    zero = ~pos & (wdelta > 0)
    dropped = int(np.count_nonzero(np.triu(zero, 1)))
    return b, dropped


def hessian_blocks(x, wdelta, d):
    """Laplacian-form blocks of the curvature part of the Guttman derivative.

    Block ``(s, t)`` has off-diagonal entries
    ``-w delta (x_is - x_js)(x_it - x_jt) / d^3`` and rows summing to zero.
    Zero-distance pairs are left out.
    """
    x = np.asarray(x, dtype=np.float64)
    n, p = x.shape
    pos = d > 0
    c3 = np.zeros_like(d)
    np.divide(wdelta, d * d * d, out=c3, where=pos)
    np.fill_diagonal(c3, 0.0)
    diff = x[:, None, :] - x[None, :, :]
    g = -np.einsum("ij,ijs,ijt->stij", c3, diff, diff)
    idx = np.arange(n)
    g[:, :, idx, idx] = 0.0
    g[:, :, idx, idx] = -_rowsum(g)
    return g
