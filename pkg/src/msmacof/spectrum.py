"""Eigenvalue diagnostics at a converged fixed point."""
from dataclasses import dataclass

import numpy as np

from .exceptions import FixedPointError
from .linalg import build_b, general_real_eigenvalues

UNIT_TOL = 1e-8
ZERO_TOL = 1e-8
#: trivial unit eigenvalues removed from a dGamma spectrum must lie this close to one
STRUCTURE_TOL = 1e-6

CLASSES = ("attracting-minimum", "saddle-or-repulsing", "indeterminate")


@dataclass(frozen=True)
class SpectrumReport:
    kind: str
    eigenvalues: np.ndarray
    n_unit: int
    n_zero: int
    kappa: float
    classification: str
    max_imag: float = 0.0
    unit_tol: float = UNIT_TOL
    zero_tol: float = ZERO_TOL


@dataclass(frozen=True)
class GlobalMinCertificate:
    eigenvalues: np.ndarray
    certified: bool
    n_unit: int


@dataclass(frozen=True)
class EmpiricalRates:
    r_final: float
    q_final: float
    q_liminf: float
    r_limsup: float
    window: int


def _real_spectrum(m):
    ev = np.linalg.eigvals(np.asarray(m, dtype=np.float64))
    max_imag = float(np.max(np.abs(ev.imag))) if ev.size else 0.0
    return np.sort(ev.real)[::-1], max_imag


def classify(kappa, unit_tol=UNIT_TOL):
    if kappa < 1 - unit_tol:
        return "attracting-minimum"
    if kappa > 1 + unit_tol:
        return "saddle-or-repulsing"
    return "indeterminate"


def analyze_jacobian(j, p=None, unit_tol=UNIT_TOL, zero_tol=ZERO_TOL):
    """Sorted spectrum, trivial-eigenvalue counts and the rate ``kappa``.

    For a dGamma matrix the ``p(p-1)/2`` eigenvalues nearest one come from
    rotations and are removed before taking the maximum; for the PCA-rotated
    map the largest eigenvalue is used as is.
    """
    p = j.p if p is None else p
    vals, max_imag = _real_spectrum(j.m)
    n_unit = int(np.sum(np.abs(vals - 1) <= unit_tol))
    n_zero = int(np.sum(np.abs(vals) <= zero_tol))
    rest = vals
    if j.kind == "dGamma":
        ntriv = p * (p - 1) // 2
        if ntriv:
            near = np.argsort(np.abs(vals - 1), kind="stable")[:ntriv]
            worst = float(np.max(np.abs(vals[near] - 1)))
            if worst > STRUCTURE_TOL:
                raise FixedPointError(
                    f"expected {ntriv} unit eigenvalues from rotations, but one is off "
                    f"by {worst:.3g}; is x a fixed point?"
                )
            rest = np.delete(vals, near)
    kappa = max(float(rest[0]), 0.0) if rest.size else 0.0
    return SpectrumReport(
        kind=j.kind,
        eigenvalues=vals,
        n_unit=n_unit,
        n_zero=n_zero,
        kappa=kappa,
        classification=classify(kappa, unit_tol),
        max_imag=max_imag,
        unit_tol=unit_tol,
        zero_tol=zero_tol,
    )


def vplus_b_spectrum(data, lap, x, p=None, unit_tol=UNIT_TOL):
    """Eigenvalues of ``V+ B(X)`` and the global-minimum check.

    At a fixed point the ``p`` columns of X are eigenvectors with eigenvalue
    one. The solution is certified as a full-dimensional global minimum when
    those unit eigenvalues are the ``p`` largest.
    """
    x = np.asarray(x, dtype=np.float64)
    p = x.shape[1] if p is None else p
    vals = general_real_eigenvalues(lap.vplus @ build_b(data, x))
    vals = np.real(vals) if np.iscomplexobj(vals) else vals
    vals = np.sort(vals)[::-1]
    certified = bool(np.all(np.abs(vals[:p] - 1) <= unit_tol))
    n_unit = int(np.sum(np.abs(vals - 1) <= unit_tol))
    return GlobalMinCertificate(eigenvalues=vals, certified=certified, n_unit=n_unit)


def empirical_rates(trace):
    """Root and ratio factors over a trailing window of the trace.

    The window is the last ``min(20, k // 2)`` iterations (at least one).
    ``q_liminf`` is the smallest ratio factor in the window and ``r_limsup``
    the largest root factor; both are finite-sample stand-ins for the limits.
    """
    k = len(trace)
    if k < 2:
        raise ValueError(f"need at least 2 iterations, trace has {k}")
    window = max(1, min(20, k // 2))
    q = np.asarray(trace.q[-window:], dtype=np.float64)
    r = np.asarray(trace.r[-window:], dtype=np.float64)
    q = q[np.isfinite(q)]
    return EmpiricalRates(
        r_final=float(trace.r[-1]),
        q_final=float(trace.q[-1]),
        q_liminf=float(q.min()) if q.size else float("nan"),
        r_limsup=float(r.max()),
        window=window,
    )
