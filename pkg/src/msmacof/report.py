"""Run reports and trace files.

Reports are JSON documents whose floats carry 17 significant digits, so
they reload bit-for-bit. Timing lives under a single ``timing`` key; every
other field is a deterministic function of the inputs.
"""
import contextlib
import json
import time
import warnings
from pathlib import Path

import numpy as np

from . import kernels
from .engine import format_trace_line, pca_rotate
from .exceptions import FixedPointError, NotDifferentiableError
from .io import format_float
from .jacobian import d_gamma, d_pi_gamma
from .linalg import build_laplacian_pair
from .spectrum import analyze_jacobian, empirical_rates, vplus_b_spectrum

FORMAT = "msmacof-report/1"
TRACE_HEADER = "k,sigma,change,r,q"


def _spectrum_dict(rep):
    return {
        "eigenvalues": rep.eigenvalues,
        "n_unit": rep.n_unit,
        "n_zero": rep.n_zero,
        "kappa": rep.kappa,
        "classification": rep.classification,
        "max_imag": rep.max_imag,
    }


def diagnose(data, result, lap=None):
    """Spectra, certificate and empirical rates for a finished run.

    dGamma is evaluated at the final iterate and dPiGamma at its PCA
    rotation, which is a fixed point of both maps. Failures (zero distances,
    tied singular values, broken fixed-point structure) are recorded as an
    ``error`` entry instead of raised.
    """
    if lap is None:
        lap = build_laplacian_pair(data)
    x = result.x
    p = x.shape[1]
    out = {"spectra": {}}
    try:
        out["spectra"]["dGamma"] = _spectrum_dict(analyze_jacobian(d_gamma(data, x, lap), p))
    except (NotDifferentiableError, FixedPointError) as exc:
        out["spectra"]["dGamma"] = {"error": str(exc)}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            xpc = pca_rotate(x)
        out["spectra"]["dPiGamma"] = _spectrum_dict(analyze_jacobian(d_pi_gamma(data, xpc, lap), p))
    except (NotDifferentiableError, FixedPointError) as exc:
        out["spectra"]["dPiGamma"] = {"error": str(exc)}
    cert = vplus_b_spectrum(data, lap, x)
    out["certificate"] = {
        "eigenvalues": cert.eigenvalues,
        "certified": cert.certified,
        "n_unit": cert.n_unit,
    }
    if len(result.trace) >= 2:
        rates = empirical_rates(result.trace)
        out["rates"] = {
            "r_final": rates.r_final,
            "q_final": rates.q_final,
            "q_liminf": rates.q_liminf,
            "r_limsup": rates.r_limsup,
            "window": rates.window,
        }
    else:
        out["rates"] = {"r_final": result.r, "q_final": result.q}
    return out


def build_report(data, info, config, result, *, diagnostics=None, timing=None):
    init = config.init if isinstance(config.init, str) else "matrix"
    rep = {
        "format": FORMAT,
        "config": {
            "p": config.p,
            "eps": config.eps,
            "itmax": config.itmax,
            "pca": config.pca,
            "init": init,
            "seed": config.seed,
        },
        "dataset": {**info, "n": data.n, "labels": list(data.labels) if data.labels else None},
        "backend": kernels.BACKEND,
        "result": {
            "itel": result.itel,
            "converged": result.converged,
            "stress": result.stress,
            "r_final": result.r,
            "q_final": result.q,
            "dropped_pairs": result.dropped_pairs,
            "pca_ties": result.pca_ties,
            "x": result.x,
        },
    }
    if diagnostics is not None:
        rep.update(diagnostics)
    rep["timing"] = timing or {}
    return rep


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report):
    return _emit(report, 2, 0) + "\n"


def write_report(path, report):
    Path(path).write_text(dumps_report(report))


def load_report(path):
    return json.loads(Path(path).read_text())


def write_trace(path, trace):
    """Trace rows as CSV with 17 significant digits; ``q`` is ``NaN`` at k = 1."""
    lines = [TRACE_HEADER]
    for k, s, e, r, q in trace.rows():
        lines.append(",".join([str(k), *(format_float(v) for v in (s, e, r, q))]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path):
    """Trace file rows as a ``(k, 5)`` float array."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def verbose_lines(trace):
    return [format_trace_line(*row) for row in trace.rows()]


@contextlib.contextmanager
def timed(times, key):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        times[key] = time.perf_counter() - t0
