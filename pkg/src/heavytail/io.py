"""Flat-file formats: data CSV, SPD matrix CSV, and float formatting."""

import csv
import math

import numpy as np

from .errors import ParseError
from .spd import make_spd
from .tyler import as_data_matrix


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_numeric_csv(path):
    """Parse a comma-separated numeric table.

    A first line containing any non-numeric field is taken as a header and
    skipped. Row and column numbers in errors are 0-based line and field
    indices in the file.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        lines = list(csv.reader(fh))
    lines = [(i, r) for i, r in enumerate(lines) if r and any(f.strip() for f in r)]
    if not lines:
        raise ParseError(f"{path}: no data", row=0)
    if not all(_is_number(f) for f in lines[0][1]):
        lines = lines[1:]
    if not lines:
        raise ParseError(f"{path}: header but no data rows", row=1)
    width = len(lines[0][1])
    out = np.empty((len(lines), width))
    for k, (i, fields) in enumerate(lines):
        if len(fields) != width:
            raise ParseError(f"{path}: row {i} has {len(fields)} fields, expected {width}", row=i)
        for j, f in enumerate(fields):
            try:
                v = float(f)
            except ValueError:
                raise ParseError(f"{path}: row {i}, column {j}: cannot parse {f!r}", row=i, col=j) from None
            if not math.isfinite(v):
                raise ParseError(f"{path}: row {i}, column {j}: non-finite value {f!r}", row=i, col=j)
            out[k, j] = v
    return out


def load_csv(path):
    """Read observations (rows) into a validated data matrix."""
    return as_data_matrix(read_numeric_csv(path))


def load_spd_csv(path):
    """Read a p x p matrix and validate it as symmetric positive definite."""
    return make_spd(read_numeric_csv(path))


def write_csv(path, X, header=None):
    """Write rows with shortest round-trip float formatting.

    ``load_csv`` on the result reproduces ``X`` bit for bit.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in X.tolist():
            fh.write(",".join(repr(v) for v in row) + "\n")


def jsonable(v):
    """Floats become JSON-safe: infinities as ``"inf"``, NaN as ``None``."""
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return jsonable(v.tolist())
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, np.integer):
        return int(v)
    return v
