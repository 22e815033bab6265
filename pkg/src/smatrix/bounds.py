"""Closed-form lower bounds on ||A^{-1}||_F and the bordered F/G/H matrices
behind the even-order Cauchy-Schwarz argument."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constructions import is_hadamard, is_smatrix
from .errors import DomainError
from .matrix_core import as_matrix, invert


class EqualityClass(str, enum.Enum):
    HADAMARD_EQUALITY = "HadamardEquality"
    SMATRIX_EQUALITY = "SMatrixEquality"
    STRICTLY_ABOVE = "StrictlyAbove"
    BELOW_CONJECTURE = "BelowConjecture"


@dataclass(frozen=True)
class BoundReport:
    n: int
    inv_frobenius: float
    max_entry: float
    hadamard_bound: float
    sloane_bound: float
    cheng_even_bound: float | None
    slack_vs_sloane: float
    equality_class: EqualityClass


@dataclass(frozen=True, eq=False)
class DrnovsekTriple:
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    h_value: float
    n: int


@dataclass(frozen=True)
class ChainReport:
    n: int
    inner_FG: float
    lhs: float
    normF_sq: float
    normG_sq: float
    h_upper: float
    chain_holds: bool


def sloane_constant(n: int) -> float:
    """2n/(n+1): the conjectured minimum of ||A^{-1}||_F ||A||_max."""
    return 2 * n / (n + 1)


def cheng_even_bound(n: int) -> float:
    if n < 2 or n % 2:
        raise DomainError(f"Cheng's even bound needs even n >= 2, got {n}")
    return 2 * math.sqrt(n * n - 2 * n + 2) / n


def _require_even_order(n: int) -> None:
    if n <= 2 or n % 2:
        raise DomainError(f"need even order n > 2, got {n}")


def h_upper(n: int) -> float:
    _require_even_order(n)
    return n * (n * n - 2 * n + 2) / (n - 2)


def h_value(a) -> float:
    a = as_matrix(a, square=True)
    n = a.shape[0]
    _require_even_order(n)
    row_sums = a.sum(axis=1)
    return float(4 * (n - 1) ** 2 / (n * (n - 2)) * np.sum(a * a) - 4 / n * np.sum(row_sums**2))


def _g_block(a: np.ndarray) -> np.ndarray:
    """sqrt((n-2)/n) (2(n-1)/(n-2) I - (2/n) 11^T) A^T"""
    n = a.shape[0]
    m = 2 * (n - 1) / (n - 2) * np.eye(n) - 2 / n * np.ones((n, n))
    return math.sqrt((n - 2) / n) * (m @ a.T)


def _bordered(block: np.ndarray) -> np.ndarray:
    n = block.shape[0]
    out = np.empty((n + 1, n + 1))
    out[0, 0] = 0.0
    out[0, 1:] = 1.0
    out[1:, 0] = 1.0
    out[1:, 1:] = block
    return out


def build_fgh(a, a_inv: np.ndarray | None = None) -> DrnovsekTriple:
    a = as_matrix(a, square=True)
    n = a.shape[0]
    _require_even_order(n)
    if a_inv is None:
        a_inv = invert(a).inverse
    f_block = math.sqrt(n / (n - 2)) * (n / 2) * a_inv
    g_block = _g_block(a)
    h = math.sqrt(n * (n - 2)) / (2 * (n - 1)) * (f_block - g_block)
    return DrnovsekTriple(F=_bordered(f_block), G=_bordered(g_block), H=h, h_value=h_value(a), n=n)


def h_matrix(a, a_inv: np.ndarray | None = None) -> np.ndarray:
    return build_fgh(a, a_inv).H


def cauchy_schwarz_chain(a, tolerance: float = 1e-9) -> ChainReport:
    a = as_matrix(a, square=True)
    n = a.shape[0]
    _require_even_order(n)
    if np.any(a < 0):
        raise DomainError("matrix has negative entries")
    if np.max(a) > 1:
        raise DomainError("chain requires ||A||_max <= 1")
    t = build_fgh(a)
    inner = float(np.vdot(t.F, t.G))
    nf = float(np.vdot(t.F, t.F))
    ng = float(np.vdot(t.G, t.G))
    lhs = n * n * (n * n - 2) ** 2 / (n - 2) ** 2
    hu = h_upper(n)
    holds = lhs <= nf * ng * (1 + tolerance) and ng <= (2 * n + hu) * (1 + tolerance)
    return ChainReport(n=n, inner_FG=inner, lhs=lhs, normF_sq=nf, normG_sq=ng, h_upper=hu, chain_holds=bool(holds))


def proposition_ratio(a) -> float:
    """||A^{-1}||_F ||A||_max, which is >= 1 for every invertible A."""
    a = as_matrix(a, square=True)
    return float(np.linalg.norm(invert(a).inverse, "fro") * np.max(np.abs(a)))


def _structurally(a: np.ndarray, scale: float, check, tolerance: float) -> bool:
    scaled = a / scale
    rounded = np.rint(scaled)
    if np.max(np.abs(scaled - rounded)) > tolerance:
        return False
    return check(rounded)


def bound_report(a, tolerance: float = 1e-8, *, signed: bool = False) -> BoundReport:
    """Evaluate every applicable lower bound on ||A^{-1}||_F and classify A.

    Non-negative input is required unless ``signed`` is set; signed matrices
    are only compared against the Hadamard bound.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    if not signed and np.any(a < 0):
        raise DomainError("matrix has negative entries")
    inv_fro = float(np.linalg.norm(invert(a).inverse, "fro"))
    mx = float(np.max(np.abs(a)))
    had = 1 / mx
    sloane = sloane_constant(n) / mx
    cheng = cheng_even_bound(n) / mx if n % 2 == 0 else None
    slack = inv_fro - sloane

    if not signed and abs(slack) <= tolerance * sloane and _structurally(a, mx, is_smatrix, tolerance):
        cls = EqualityClass.SMATRIX_EQUALITY
    elif abs(inv_fro - had) <= tolerance * had and _structurally(a, mx, is_hadamard, tolerance):
        cls = EqualityClass.HADAMARD_EQUALITY
    elif not signed and inv_fro < sloane * (1 - tolerance):
        cls = EqualityClass.BELOW_CONJECTURE
    else:
        cls = EqualityClass.STRICTLY_ABOVE
    return BoundReport(n=n, inv_frobenius=inv_fro, max_entry=mx, hadamard_bound=had, sloane_bound=sloane,
                       cheng_even_bound=cheng, slack_vs_sloane=slack, equality_class=cls)
