"""Kernel backend selection.

The compiled Cython kernels are used when the extension is importable; the
numpy implementation is the fallback. Set ``MSMACOF_PURE_PYTHON=1`` to force
the fallback.
"""
import importlib
import os

BACKENDS = ("cython", "python")

_MODULES = {"cython": "msmacof._ckernels", "python": "msmacof._kernels_py"}


def load_backend(name):
    """Import and return the kernel module for `name` (raises ImportError)."""
    if name not in _MODULES:
        raise ValueError(f"unknown kernel backend {name!r}; choose from {BACKENDS}")
    return importlib.import_module(_MODULES[name])


def available_backends():
    out = []
    for name in BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select():
    if os.environ.get("MSMACOF_PURE_PYTHON", "") not in ("", "0"):
        return "python", load_backend("python")
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", load_backend("python")


BACKEND, _impl = _select()

distance_stats = _impl.distance_stats
b_matrix = _impl.b_matrix
hessian_blocks = _impl.hessian_blocks
