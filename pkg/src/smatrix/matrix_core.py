"""Dense matrix helpers: norms, LU inversion with a condition estimate,
central-difference gradients, and the plain-text matrix format.

Matrices are ordinary 2-D ``float64`` numpy arrays. Nothing in this package
mutates an array it was handed; every operation returns a fresh value.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgWarning, lapack, lu_factor

from .errors import DimensionError, DomainError, IllConditionedError, MatrixFormatError, SingularError

RCOND_FLOOR = 1e-14


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array (copying only when needed)."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def as_vector(v) -> np.ndarray:
    x = np.asarray(v, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise DimensionError(f"expected a non-empty vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("vector has non-finite entries")
    return x


def frobenius_norm(a) -> float:
    a = as_matrix(a)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return 0.0
    # scaled to avoid under/overflow of the squares
    return scale * float(np.linalg.norm(a / scale, "fro"))


def max_norm(a) -> float:
    return float(np.max(np.abs(as_matrix(a))))


def frobenius_inner(a, b) -> float:
    """trace(B^T A), i.e. the entrywise dot product."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.vdot(a, b))


@dataclass(frozen=True)
class InversionResult:
    inverse: np.ndarray
    reciprocal_condition_estimate: float


def lu_rcond(a: np.ndarray):
    """LU-factor ``a`` and return ``(lu, piv, rcond)``.

    ``rcond`` is LAPACK's 1-norm reciprocal condition estimate computed from
    the factors. Raises SingularError on an exactly zero pivot.
    """
    a = as_matrix(a, square=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        raise SingularError("matrix is singular (zero pivot in LU factorization)")
    anorm = float(np.max(np.sum(np.abs(a), axis=0)))
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    if info != 0:
        raise SingularError(f"condition estimation failed (info={info})")
    return lu, piv, float(min(max(rcond, 0.0), 1.0))


def invert(a, rcond_floor: float = RCOND_FLOOR) -> InversionResult:
    """Invert a square matrix via LU with partial pivoting."""
    lu, piv, rcond = lu_rcond(a)
    if rcond < rcond_floor:
        raise IllConditionedError(f"reciprocal condition {rcond:.3e} below {rcond_floor:.0e}")
    inv, info = lapack.dgetri(lu, piv)
    if info != 0:
        raise SingularError(f"inversion failed (info={info})")
    return InversionResult(inverse=inv, reciprocal_condition_estimate=rcond)


def inverse(a) -> np.ndarray:
    return invert(a).inverse


def finite_diff_gradient(f: Callable[[np.ndarray], float], a, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function of a matrix."""
    if not h > 0:
        raise DomainError("step h must be positive")
    a = as_matrix(a)
    grad = np.empty_like(a)
    x = a.copy()
    for idx in np.ndindex(a.shape):
        orig = x[idx]
        x[idx] = orig + h
        fp = f(x.copy())
        x[idx] = orig - h
        fm = f(x.copy())
        x[idx] = orig
        grad[idx] = (fp - fm) / (2 * h)
    return grad


# -- text format -------------------------------------------------------------
# First line "rows cols", then one line per row of space-separated floats.
# repr() gives the shortest string that round-trips, so write/read is lossless.

def format_matrix(a) -> str:
    a = as_matrix(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    lines.extend(" ".join(repr(float(x)) for x in row) for row in a)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, path=None) -> np.ndarray:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty input; expected header 'rows cols'", line=1, column=1, path=path)
    header = lines[0].split(" ")
    if len(header) != 2:
        raise MatrixFormatError("header must be exactly 'rows cols'", line=1, column=1, path=path)
    dims = []
    col = 1
    for tok in header:
        try:
            v = int(tok)
        except ValueError:
            raise MatrixFormatError(f"bad dimension {tok!r}", line=1, column=col, path=path) from None
        if v <= 0:
            raise MatrixFormatError(f"dimension must be positive, got {v}", line=1, column=col, path=path)
        dims.append(v)
        col += len(tok) + 1
    rows, cols = dims
    if len(lines) - 1 != rows:
        # point at the first missing line, or the first surplus one
        bad = len(lines) + 1 if len(lines) - 1 < rows else rows + 2
        raise MatrixFormatError(f"expected {rows} data rows, found {len(lines) - 1}",
                                line=bad, column=1, path=path)
    out = np.empty((rows, cols))
    for i, line in enumerate(lines[1:]):
        toks = line.split(" ")
        if len(toks) != cols:
            raise MatrixFormatError(f"expected {cols} values, found {len(toks)}", line=i + 2, column=1, path=path)
        col = 1
        for j, tok in enumerate(toks):
            try:
                v = float(tok)
            except ValueError:
                raise MatrixFormatError(f"bad number {tok!r}", line=i + 2, column=col, path=path) from None
            if not np.isfinite(v):
                raise MatrixFormatError(f"non-finite value {tok!r}", line=i + 2, column=col, path=path)
            out[i, j] = v
            col += len(tok) + 1
    return out


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read file: {exc.strerror or exc}", path=str(path)) from exc
    return parse_matrix(text, path=str(path))


def write_matrix(a, path) -> None:
    Path(path).write_text(format_matrix(a))


def format_csv_int(a) -> str:
    """Integer CSV for 0/1 or +-1 matrices."""
    a = as_matrix(a)
    ints = np.rint(a).astype(np.int64)
    if not np.array_equal(ints, a):
        raise DomainError("CSV export requires integer entries")
    return "\n".join(",".join(str(x) for x in row) for row in ints) + "\n"
