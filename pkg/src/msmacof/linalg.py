"""Dense linear-algebra substrate: distances, V and its pseudo-inverse, B(X),
and the eigen/singular value routines used by the diagnostics.

Configurations are plain ``(n, p)`` float arrays throughout.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import kernels
from .exceptions import DataError, DisconnectedWeightsError, EigenSolverError

SYMMETRY_TOL = 1e-10
NORMALIZATION_TOL = 1e-12
#: imaginary parts up to this size are treated as rounding noise
IMAG_TOL = 1e-8


def _frozen(a):
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DissimilarityData:
    """Dissimilarities and weights on ``n`` objects.

    Both matrices are stored full, symmetric and hollow. `normalized` records
    whether the dissimilarities have been scaled so that
    ``1/2 * sum_{i<j} w_ij delta_ij^2 == 1``.
    """

    delta: np.ndarray
    w: np.ndarray
    normalized: bool = False
    labels: tuple | None = field(default=None)

    def __post_init__(self):
        delta = _frozen(self.delta)
        w = _frozen(self.w)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "w", w)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        _check_hollow_symmetric(delta, "delta")
        _check_hollow_symmetric(w, "w")
        if delta.shape != w.shape:
            raise DataError(f"delta {delta.shape} and w {w.shape} differ in shape")
        n = delta.shape[0]
        if n < 2:
            raise DataError("need at least two objects")
        if self.labels is not None and len(self.labels) != n:
            raise DataError(f"{len(self.labels)} labels for {n} objects")
        ncomp, _ = connected_components(w > 0, directed=False)
        if ncomp > 1:
            raise DisconnectedWeightsError(
                f"weight graph has {ncomp} connected components; the problem separates"
            )
        if self.normalized:
            total = 0.5 * np.sum(np.triu(w * delta**2, 1))
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise DataError(f"flagged normalized but 1/2 sum w delta^2 = {total!r}")

    @property
    def n(self):
        return self.delta.shape[0]

    @classmethod
    def from_delta(cls, delta, w=None, labels=None):
        """Build from a dissimilarity matrix, with unit weights by default."""
        delta = np.asarray(delta, dtype=np.float64)
        if w is None:
            w = np.ones_like(delta)
            np.fill_diagonal(w, 0.0)
        return cls(delta=delta, w=w, labels=labels)


def _check_hollow_symmetric(a, name):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DataError(f"{name} has non-finite entries")
    if np.any(np.diag(a) != 0):
        raise DataError(f"{name} must have a zero diagonal")
    if np.any(a < 0):
        raise DataError(f"{name} has negative entries")
    if not np.allclose(a, a.T, rtol=0, atol=SYMMETRY_TOL * max(1.0, np.abs(a).max())):
        raise DataError(f"{name} is not symmetric")


@dataclass(frozen=True, eq=False)
class LaplacianPair:
    """The weight Laplacian ``V`` and its Moore-Penrose inverse."""

    v: np.ndarray
    vplus: np.ndarray


def distance_matrix(x):
    """Euclidean distances between the rows of `x`."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    n = x.shape[0]
    z = np.zeros((n, n))
    d, *_ = kernels.distance_stats(x, z, z)
    return d


def laplacian(w):
    """``sum_{i<j} w_ij A_ij``: negated weights off the diagonal, zero row sums."""
    v = -np.asarray(w, dtype=np.float64)
    np.fill_diagonal(v, 0.0)
    np.fill_diagonal(v, -v.sum(axis=1))
    return v


def build_laplacian_pair(data):
    """V and V+ for `data`.

    V+ comes from the bordered inverse ``(V + ee'/n)^-1 - ee'/n``, which is
    exact because ``e`` spans the null space of V for a connected weight graph.
    """
    v = laplacian(data.w)
    n = v.shape[0]
    try:
        vplus = np.linalg.solve(v + 1.0 / n, np.eye(n)) - 1.0 / n
    except np.linalg.LinAlgError as exc:
        raise DisconnectedWeightsError("bordered Laplacian is singular") from exc
    vplus = 0.5 * (vplus + vplus.T)
    return LaplacianPair(v=_frozen(v), vplus=_frozen(vplus))


def build_b(data, x, return_dropped=False):
    """B(X) = sum over pairs with positive distance of ``w delta / d * A_ij``.

    With ``return_dropped=True`` also returns how many pairs with
    ``w * delta > 0`` were left out because they sit at zero distance.
    """
    d = distance_matrix(x)
    b, dropped = kernels.b_matrix(data.w * data.delta, d)
    if return_dropped:
        return b, dropped
    return b


def _sign_fix(vecs):
    # make the largest-magnitude entry of each column positive (first on ties)
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs, signs


def sym_eigen(a):
    """Eigenvalues (descending) and orthonormal eigenvectors of symmetric `a`.

    Eigenvector signs follow the same convention as :func:`svd_thin`.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if not np.allclose(a, a.T, rtol=0, atol=SYMMETRY_TOL * scale):
        raise ValueError("sym_eigen needs a symmetric matrix")
    vals, vecs = np.linalg.eigh(0.5 * (a + a.T))
    order = np.argsort(vals, kind="stable")[::-1]
    vecs, _ = _sign_fix(vecs[:, order])
    return vals[order], vecs


def svd_thin(x):
    """Thin SVD ``x = K diag(lam) L'`` with a deterministic sign convention.

    Each column of ``L`` has its largest-magnitude entry positive (lowest
    index wins ties); ``K`` is flipped to match.

    Returns
    -------
    k : (n, p) ndarray
    lam : (p,) ndarray, descending
    l : (p, p) ndarray
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] < x.shape[1]:
        raise ValueError(f"svd_thin needs n >= p, got shape {x.shape}")
    k, lam, lt = np.linalg.svd(x, full_matrices=False)
    l, signs = _sign_fix(lt.T)
    return k * signs, lam, l


def pca_basis(x):
    """Thin SVD with signs fixed on the left factor instead of the right.

    Each column of ``K`` has its largest-magnitude entry positive. Under this
    convention ``X L = K diag(lam)`` is unchanged when X is replaced by
    ``X M`` for any orthonormal M, which the L-based convention of
    :func:`svd_thin` cannot guarantee.
    """
    k, lam, l = svd_thin(x)
    k, signs = _sign_fix(k)
    return k, lam, l * signs


def general_real_eigenvalues(a, imag_tol=IMAG_TOL):
    """Eigenvalues of a general real square matrix.

    If every imaginary part is at most `imag_tol` the imaginary parts are
    dropped and a real array sorted by descending value is returned.
    Otherwise a complex array sorted by descending modulus is returned.
    """
    a = np.asarray(a, dtype=np.float64)
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigenvalues did not converge: {exc}") from exc
    if ev.size and np.max(np.abs(ev.imag)) <= imag_tol:
        return np.sort(ev.real)[::-1]
    order = np.lexsort((-ev.imag, -ev.real, -np.abs(ev)))
    return ev[order]
