"""Derivatives of the Guttman transform, the PCA rotation and their composite.

Jacobians are dense ``(n*p, n*p)`` matrices acting on configurations
flattened column by column: entry ``(s*n + i, t*n + j)`` is the partial of
output element ``(i, s)`` with respect to input element ``(j, t)``.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .engine import SV_GAP_TOL, _require_normalized, guttman_transform, pca_rotate
from .exceptions import NotDifferentiableError
from .linalg import build_laplacian_pair, pca_basis

KINDS = ("dGamma", "dPi", "dPiGamma")


def vec(x):
    """Stack the columns of `x` into one vector."""
    return np.asarray(x, dtype=np.float64).ravel(order="F")


def unvec(v, n, p):
    return np.asarray(v, dtype=np.float64).reshape((n, p), order="F")


@dataclass(frozen=True, eq=False)
class JacobianMatrix:
    m: np.ndarray
    kind: str
    n: int
    p: int

    def apply(self, y):
        """The derivative applied to direction `y` (an ``(n, p)`` array)."""
        return unvec(self.m @ vec(y), self.n, self.p)

    def block(self, s, t):
        n = self.n
        return self.m[s * n:(s + 1) * n, t * n:(t + 1) * n]


def _check_differentiable(data, d):
    active = np.triu((data.w * data.delta > 0) & (d <= 0), 1)
    if active.any():
        i, j = (int(k) for k in np.argwhere(active)[0])
        raise NotDifferentiableError(
            f"zero distance between objects {i} and {j} with w*delta > 0; "
            "the Guttman transform is not differentiable here"
        )


def d_gamma(data, x, lap=None):
    """Analytic Jacobian of the Guttman transform at `x`.

    Block ``(s, t)`` is ``V+ (B(X) [s == t] - G_st)`` where ``G_st`` collects
    ``w delta (x_is - x_js)(x_it - x_jt) / d_ij^3`` in Laplacian form.
    """
    _require_normalized(data)
    x = np.asarray(x, dtype=np.float64)
    n, p = x.shape
    if lap is None:
        lap = build_laplacian_pair(data)
    d, *_ = kernels.distance_stats(x, data.w, data.delta)
    _check_differentiable(data, d)
    wdelta = data.w * data.delta
    b, _ = kernels.b_matrix(wdelta, d)
    g = -kernels.hessian_blocks(x, wdelta, d)
    for s in range(p):
        g[s, s] += b
    m = np.einsum("ij,stjk->sitk", lap.vplus, g).reshape(n * p, n * p)
    return JacobianMatrix(m=m, kind="dGamma", n=n, p=p)


def _check_gap(lam):
    if lam.size > 1 and np.any(-np.diff(lam) <= SV_GAP_TOL * lam[0]):
        raise NotDifferentiableError(
            f"singular values {lam} are not distinct; the PCA rotation is not differentiable"
        )


def d_pi(x):
    """Analytic Jacobian of the PCA rotation ``X -> X L`` at `x`.

    ``DPi(X)[Y] = Y L + K diag(lam) M`` with ``M`` antisymmetric,
    ``m_kl = -(lam_k u_kl + lam_l u_lk) / (lam_k^2 - lam_l^2)`` and
    ``U = K' Y L``.
    """
    x = np.asarray(x, dtype=np.float64)
    n, p = x.shape
    k, lam, l = pca_basis(x)
    _check_gap(lam)
    # U for every basis direction e_i e_s': u[i, s, a, b] = k[i, a] l[s, b]
    u = np.einsum("ia,sb->isab", k, l)
    den = lam[:, None] ** 2 - lam[None, :] ** 2
    np.fill_diagonal(den, 1.0)
    num = lam[:, None] * u + lam[None, :] * np.swapaxes(u, 2, 3)
    mm = -num / den
    mm[..., np.arange(p), np.arange(p)] = 0.0
    # out[t, a, s, i]: output (a, t) for input direction (i, s)
    out = np.einsum("ak,k,iskt->tasi", k, lam, mm)
    out += np.einsum("ai,st->tasi", np.eye(n), l)
    return JacobianMatrix(m=out.reshape(n * p, n * p), kind="dPi", n=n, p=p)


def d_pi_gamma(data, x, lap=None):
    """Chain rule: ``DPi(Gamma(X)) @ DGamma(X)``."""
    if lap is None:
        lap = build_laplacian_pair(data)
    dg = d_gamma(data, x, lap)
    dp = d_pi(guttman_transform(data, lap, x))
    return JacobianMatrix(m=dp.m @ dg.m, kind="dPiGamma", n=dg.n, p=dg.p)


_MAP_NAMES = {"gamma": "dGamma", "pi": "dPi", "pi_gamma": "dPiGamma"}
_MAP_NAMES.update({v: v for v in KINDS})


def default_step(x):
    return 1e-6 * max(1.0, float(np.max(np.abs(x))))


def _map_function(kind, data, n, p, lap):
    if callable(kind):
        return kind
    if kind not in _MAP_NAMES:
        raise ValueError(f"unknown map {kind!r}")
    if kind in ("pi", "dPi"):
        return lambda v: vec(pca_rotate(unvec(v, n, p)))
    if lap is None:
        lap = build_laplacian_pair(data)
    if kind in ("gamma", "dGamma"):
        return lambda v: vec(guttman_transform(data, lap, unvec(v, n, p)))
    return lambda v: vec(pca_rotate(guttman_transform(data, lap, unvec(v, n, p))))


def fd_jacobian(kind, data, x, h=None, lap=None):
    """Central-difference Jacobian of a map at `x`.

    `kind` is ``"gamma"``, ``"pi"``, ``"pi_gamma"`` or a callable taking and
    returning flattened configurations (column-major). `data` may be None for
    ``"pi"`` and callables. Default step is ``1e-6 * max(1, max|x|)``.
    """
    x = np.asarray(x, dtype=np.float64)
    n, p = x.shape
    f = _map_function(kind, data, n, p, lap)
    h = default_step(x) if h is None else h
    x0 = vec(x)
    cols = []
    for c in range(x0.size):
        xp = x0.copy()
        xm = x0.copy()
        xp[c] += h
        xm[c] -= h
        cols.append((np.asarray(f(xp)) - np.asarray(f(xm))) / (2 * h))
    m = np.column_stack(cols)
    name = "custom" if callable(kind) else _MAP_NAMES[kind]
    return JacobianMatrix(m=m, kind=name, n=n, p=p)
