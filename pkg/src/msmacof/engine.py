"""SMACOF and PCA-rotated SMACOF iterations."""
import math
import sys
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .exceptions import DataError, NearTiedSingularValuesWarning
from .linalg import DissimilarityData, build_laplacian_pair, pca_basis, sym_eigen

#: relative singular-value gap below which the PCA rotation is not unique
SV_GAP_TOL = 1e-10
#: Torgerson eigenvalues at or below this fraction of the largest count as zero
EIG_TOL = 1e-12


@dataclass(frozen=True)
class StressDecomposition:
    """Stress and its parts at one configuration.

    ``sigma = 1 - rho + eta2 / 2`` when the dissimilarities are normalized.
    """

    sigma: float
    rho: float
    eta2: float

    @property
    def eta(self):
        return math.sqrt(self.eta2)

    @property
    def lam(self):
        """``rho / eta`` (zero at the origin)."""
        return self.rho / self.eta if self.eta2 > 0 else 0.0


@dataclass
class IterationTrace:
    """Per-iteration record of a SMACOF run.

    Row ``k - 1`` describes iteration ``k`` (1-based): the stress and its parts
    at the new iterate ``X(k)``, the V-metric change ``eta(X(k) - X(k-1))``,
    the root factor ``change ** (1/k)`` and the ratio factor
    ``change_k / change_{k-1}`` (NaN at ``k = 1``, where it is undefined).
    ``initial`` holds the decomposition at the start configuration.
    """

    initial: StressDecomposition
    sigma: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    eta2: list = field(default_factory=list)
    change: list = field(default_factory=list)
    r: list = field(default_factory=list)
    q: list = field(default_factory=list)

    def __len__(self):
        return len(self.sigma)

    @property
    def k(self):
        return np.arange(1, len(self) + 1)

    @property
    def eta(self):
        return np.sqrt(np.asarray(self.eta2))

    @property
    def lam(self):
        return np.asarray(self.rho) / self.eta

    def append(self, dec, change, r, q):
        self.sigma.append(dec.sigma)
        self.rho.append(dec.rho)
        self.eta2.append(dec.eta2)
        self.change.append(change)
        self.r.append(r)
        self.q.append(q)

    def rows(self):
        """Yield ``(k, sigma, change, r, q)`` tuples."""
        for i in range(len(self)):
            yield i + 1, self.sigma[i], self.change[i], self.r[i], self.q[i]


def _fmt15(v):
    return "NA" if math.isnan(v) else f"{v:.15f}"


def format_trace_line(k, sigma, change, r, q):
    """One verbose line; also the row format of trace files."""
    return (
        f"itel {k:5d} loss {_fmt15(sigma)} chan {_fmt15(change)} "
        f"rcnf {_fmt15(r)} qcnf {_fmt15(q)}"
    )


@dataclass(frozen=True)
class SolverConfig:
    """Options for :func:`run`.

    `init` is ``"torgerson"``, ``"random"`` (seeded standard normal entries,
    column-centered; uses `seed`) or an explicit ``(n, p)`` array.
    """

    p: int = 2
    eps: float = 1e-15
    itmax: int = 10000
    pca: bool = False
    verbose: bool = False
    init: object = "torgerson"
    seed: int | None = None

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.itmax < 1:
            raise ValueError(f"itmax must be at least 1, got {self.itmax}")
        if self.p < 1:
            raise ValueError(f"p must be at least 1, got {self.p}")
        if isinstance(self.init, str) and self.init not in ("torgerson", "random"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass
class SolverResult:
    x: np.ndarray
    itel: int
    stress: float
    q: float
    r: float
    converged: bool
    trace: IterationTrace
    #: most pairs with w*delta > 0 dropped from B(X) at zero distance in any iteration
    dropped_pairs: int = 0
    #: iterations whose PCA rotation hit near-tied singular values
    pca_ties: int = 0
    x0: np.ndarray | None = None


def normalize(data):
    """Scale the dissimilarities so that ``1/2 sum_{i<j} w delta^2 = 1``."""
    total = 0.5 * np.sum(np.triu(data.w * data.delta**2, 1))
    if not total > 0:
        raise DataError("cannot normalize: sum of w * delta^2 is zero")
    return replace(data, delta=data.delta / math.sqrt(total), normalized=True)


def _require_normalized(data):
    if not data.normalized:
        raise DataError("dissimilarities must be normalized first (see normalize)")


def stress(data, x):
    """:class:`StressDecomposition` of configuration `x`."""
    _require_normalized(data)
    _, sigma, rho, eta2 = kernels.distance_stats(x, data.w, data.delta)
    return StressDecomposition(sigma=sigma, rho=rho, eta2=eta2)


def guttman_transform(data, lap, x):
    """``V+ B(X) X``."""
    _require_normalized(data)
    x = np.asarray(x, dtype=np.float64)
    d, *_ = kernels.distance_stats(x, data.w, data.delta)
    b, _ = kernels.b_matrix(data.w * data.delta, d)
    return lap.vplus @ (b @ x)


def _sv_tied(lam):
    if lam.size < 2 or lam[0] == 0:
        return lam.size >= 2
    return bool(np.any(-np.diff(lam) <= SV_GAP_TOL * lam[0]))


def _rotate(x):
    _, lam, l = pca_basis(x)
    return x @ l, _sv_tied(lam)


def pca_rotate(x):
    """Rotate `x` to principal axes: ``X L`` for the thin SVD ``X = K diag(lam) L'``.

    Column signs are fixed so that the largest-magnitude entry of every output
    column is positive, which makes the result identical for X and X M.

    Warns with :class:`NearTiedSingularValuesWarning` when two singular values
    are within a relative gap of ``1e-10``; the rotation is then one of many.
    """
    xr, tied = _rotate(np.asarray(x, dtype=np.float64))
    if tied:
        warnings.warn(
            "near-tied singular values; PCA rotation is not unique",
            NearTiedSingularValuesWarning,
            stacklevel=2,
        )
    return xr


def torgerson_init(data, p):
    """Classical scaling start: top-`p` eigenpairs of ``-1/2 J delta^2 J``."""
    n = data.n
    h = data.delta**2
    j = np.eye(n) - 1.0 / n
    h = -(j @ h @ j) / 2
    vals, vecs = sym_eigen(h)
    if p > n - 1:
        raise DataError(f"p = {p} exceeds n - 1 = {n - 1}")
    for i in range(p):
        if not vals[i] > EIG_TOL * max(vals[0], 0.0):
            raise DataError(
                f"eigenvalue {i + 1} of the double-centered matrix is {vals[i]!r}; "
                f"Torgerson start needs {p} positive eigenvalues"
            )
    return vecs[:, :p] * np.sqrt(vals[:p])


def random_init(n, p, seed=None):
    x = np.random.default_rng(seed).standard_normal((n, p))
    return x - x.mean(axis=0)


def initial_configuration(data, config):
    if isinstance(config.init, str):
        if config.init == "torgerson":
            return torgerson_init(data, config.p)
        return random_init(data.n, config.p, config.seed)
    x0 = np.array(config.init, dtype=np.float64)
    if x0.shape != (data.n, config.p):
        raise DataError(f"initial configuration has shape {x0.shape}, need {(data.n, config.p)}")
    return x0


def run(data, config=None, *, lap=None, stream=None, callback=None):
    """Iterate the Guttman transform (optionally PCA-rotating each iterate).

    Stops when the V-metric change between successive iterates drops below
    ``config.eps`` or after ``config.itmax`` Guttman steps; hitting the cap is
    reported through ``result.converged``, not raised. Unnormalized data is
    normalized first. Verbose lines go to `stream` (default stdout).
    `callback(k, x)`, if given, sees every new iterate.
    """
    config = config or SolverConfig()
    if not data.normalized:
        data = normalize(data)
    if not 1 <= config.p <= data.n - 1:
        raise DataError(f"p must lie in [1, {data.n - 1}], got {config.p}")
    if lap is None:
        lap = build_laplacian_pair(data)
    v, vplus = lap.v, lap.vplus
    w, delta = data.w, data.delta
    wdelta = w * delta
    out = stream if stream is not None else sys.stdout

    x0 = initial_configuration(data, config)
    xold = x0
    dold, s0, rho0, eta20 = kernels.distance_stats(xold, w, delta)
    trace = IterationTrace(initial=StressDecomposition(s0, rho0, eta20))
    eold = math.inf
    dropped_max = 0
    ties = 0
    itel = 1
    while True:
        b, dropped = kernels.b_matrix(wdelta, dold)
        dropped_max = max(dropped_max, dropped)
        xnew = vplus @ (b @ xold)
        if config.pca:
            xnew, tied = _rotate(xnew)
            ties += tied
        dnew, snew, rho, eta2 = kernels.distance_stats(xnew, w, delta)
        dx = xold - xnew
        enew = math.sqrt(max(0.0, float(np.sum(dx * (v @ dx)))))
        rnew = enew ** (1.0 / itel)
        qnew = enew / eold if math.isfinite(eold) else math.nan
        trace.append(StressDecomposition(snew, rho, eta2), enew, rnew, qnew)
        if callback is not None:
            callback(itel, xnew)
        if config.verbose:
            print(format_trace_line(itel, snew, enew, rnew, qnew), file=out)
        if enew < config.eps or itel == config.itmax:
            break
        xold, dold, eold = xnew, dnew, enew
        itel += 1
    return SolverResult(
        x=xnew,
        itel=itel,
        stress=snew,
        q=qnew,
        r=rnew,
        converged=enew < config.eps,
        trace=trace,
        dropped_pairs=dropped_max,
        pca_ties=ties,
        x0=x0,
    )
