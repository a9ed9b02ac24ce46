"""Lower-triangle matrix files, similarity transforms and built-in datasets.

File format
-----------
Blank lines and lines starting with ``#`` are ignored. An optional header
line holds only labels. Each following row ``k`` (1-based) holds an optional
label and then exactly ``k`` numbers, the entries ``(k, 0) .. (k, k-1)`` of a
symmetric hollow matrix of order ``n`` = rows + 1::

          KVP PvdA
    PvdA 2.63
    VVD  2.27 3.72
"""
import hashlib
import io
import math
import os
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import ChecksumError, DataError, ParseError
from .linalg import DissimilarityData

DEGRUIJTER_TEXT = """\
      KVP PvdA  VVD  ARP  CHU  CPN  PSP   BP
PvdA 2.63
VVD  2.27 3.72
ARP  1.60 2.64 2.46
CHU  1.80 3.22 1.97 0.20
CPN  4.54 2.12 5.13 4.84 4.80
PSP  3.73 1.59 4.55 3.73 4.08 1.08
BP   4.18 4.22 3.90 4.28 3.96 3.34 3.88
D66  3.17 2.47 1.67 3.13 3.04 4.42 3.36 4.36
"""

EKMAN_FILE = "ekman.txt"
EKMAN_SHA256 = "bd812b178dd1ee8ed4671dfe29d2bb1b76a002b0483e02b111e977a52696d94b"

BUILTINS = ("degruijter", "ekman")


def _number(tok):
    try:
        v = float(tok)
    except ValueError:
        return None
    return v


def loads_lower_triangle(text):
    """Parse lower-triangle text; returns ``(matrix, labels or None)``."""
    header = None
    rows = []
    row_labels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        values = [_number(t) for t in toks]
        if not rows and header is None and all(v is None for v in values):
            header = toks
            continue
        label = None
        if values[0] is None:
            label = toks[0]
            toks, values = toks[1:], values[1:]
        for tok, v in zip(toks, values):
            if v is None:
                raise ParseError(f"non-numeric token {tok!r}", lineno)
            if not math.isfinite(v):
                raise ParseError(f"non-finite entry {tok!r}", lineno)
            if v < 0:
                raise ParseError(f"negative entry {tok!r}", lineno)
        expected = len(rows) + 1
        if len(values) != expected:
            raise ParseError(f"row {expected} has {len(values)} entries, expected {expected}", lineno)
        rows.append(values)
        row_labels.append(label)
    if not rows:
        raise ParseError("no matrix rows found")
    n = len(rows) + 1
    m = np.zeros((n, n))
    for k, vals in enumerate(rows, start=1):
        m[k, :k] = vals
    m = m + m.T
    labels = None
    if header is not None and len(header) == n:
        labels = header
    elif header is not None and len(header) == n - 1 and all(row_labels):
        labels = [header[0], *row_labels]
    elif header is not None:
        raise ParseError(f"header has {len(header)} labels for {n} objects")
    return m, labels


def _read_text(source):
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_text()


def read_lower_triangle(source):
    """Read a lower-triangle file (path or open text file)."""
    return loads_lower_triangle(_read_text(source))


def parse_lower_triangle(source, weights=None):
    """Dissimilarities from a lower-triangle file.

    Weights are all one unless `weights` names a companion file in the same
    format.
    """
    delta, labels = read_lower_triangle(source)
    w = None
    if weights is not None:
        w, _ = read_lower_triangle(weights)
        if w.shape != delta.shape:
            raise DataError(f"weights are {w.shape[0]}x{w.shape[0]}, dissimilarities {delta.shape[0]}x{delta.shape[0]}")
    return DissimilarityData.from_delta(delta, w=w, labels=labels)


def dumps_lower_triangle(matrix, labels=None):
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    out = io.StringIO()
    if labels is not None:
        labels = [str(s) for s in labels]
        width = max(len(s) for s in labels)
        out.write(" " * width + " " + " ".join(labels[:-1]) + "\n")
    for k in range(1, n):
        cells = " ".join(format_float(float(v)) for v in m[k, :k])
        if labels is not None:
            out.write(f"{labels[k]:<{width}} {cells}\n")
        else:
            out.write(cells + "\n")
    return out.getvalue()


def write_lower_triangle(path, matrix, labels=None):
    """Write the strict lower triangle of `matrix` with 17 significant digits."""
    Path(path).write_text(dumps_lower_triangle(matrix, labels))


def format_float(v):
    """17 significant digits, always with a decimal point or exponent."""
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    s = f"{v:.17g}"
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def similarity_to_dissimilarity(s, exponent=3.0, w=None, labels=None):
    """``delta_ij = (1 - s_ij) ** exponent`` for similarities in [0, 1]."""
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DataError(f"similarities must be square, got {s.shape}")
    if not np.all(np.isfinite(s)) or np.any(s < 0) or np.any(s > 1):
        raise DataError("similarities must lie in [0, 1]")
    if not np.array_equal(s, s.T):
        raise DataError("similarities must be symmetric")
    if not np.all(np.diag(s) == 1):
        raise DataError("similarities must have a unit diagonal")
    delta = (1.0 - s) ** exponent
    np.fill_diagonal(delta, 0.0)
    return DissimilarityData.from_delta(delta, w=w, labels=labels)


def _ekman_bytes():
    return resources.files("msmacof").joinpath("data", EKMAN_FILE).read_bytes()


def ekman_available():
    """True when the vendored Ekman file is present and matches its checksum."""
    try:
        return hashlib.sha256(_ekman_bytes()).hexdigest() == EKMAN_SHA256
    except (FileNotFoundError, OSError):
        return False


def ekman_similarities():
    raw = _ekman_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != EKMAN_SHA256:
        raise ChecksumError(f"{EKMAN_FILE} checksum {digest} != {EKMAN_SHA256}")
    s, labels = loads_lower_triangle(raw.decode())
    np.fill_diagonal(s, 1.0)
    return s, labels


def load_dataset(spec, weights=None, similarity=False, exponent=3.0):
    """Resolve a built-in name or a file path.

    Returns ``(data, info)`` where `info` describes the source and the
    transform applied. Ekman is stored as similarities and is always
    transformed with `exponent`; files are transformed only when
    `similarity` is set.
    """
    info = {"name": str(spec)}
    if spec == "degruijter":
        delta, labels = loads_lower_triangle(DEGRUIJTER_TEXT)
        info.update(source="builtin", transform="none")
        w = read_lower_triangle(weights)[0] if weights is not None else None
        return DissimilarityData.from_delta(delta, w=w, labels=labels), info
    if spec == "ekman":
        s, labels = ekman_similarities()
        info.update(source="builtin", sha256=EKMAN_SHA256, transform="similarity", exponent=exponent)
        w = read_lower_triangle(weights)[0] if weights is not None else None
        return similarity_to_dissimilarity(s, exponent, w=w, labels=labels), info
    if not os.path.exists(spec):
        raise DataError(f"no such dataset or file: {spec!r} (built-ins: {', '.join(BUILTINS)})")
    raw = Path(spec).read_bytes()
    info.update(source="file", sha256=hashlib.sha256(raw).hexdigest())
    m, labels = loads_lower_triangle(raw.decode())
    w = read_lower_triangle(weights)[0] if weights is not None else None
    if similarity:
        np.fill_diagonal(m, 1.0)
        info.update(transform="similarity", exponent=exponent)
        return similarity_to_dissimilarity(m, exponent, w=w, labels=labels), info
    info.update(transform="none")
    return DissimilarityData.from_delta(m, w=w, labels=labels), info
