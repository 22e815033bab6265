"""Audits of the structural lemmas for even-order near-extremal matrices.

The matrix audits compute every quantity and margin on an arbitrary input and
only *flag* whether the hypothesis ||B^{-1}||_F <= 2n/(n+1), ||B||_max <= 1
holds; they never abort on a failed hypothesis. The final step is a pure
scalar chain, replayed here in exact rational arithmetic.
"""
from __future__ import annotations

import logging
import math
import os
from functools import lru_cache
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import build_fgh, h_upper, h_value, sloane_constant
from .errors import DomainError
from .matrix_core import as_matrix, invert

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PropAudit:
    n: int
    c: float
    r: np.ndarray
    hypothesis_met: bool
    prop1_residual: float
    prop2_margin: float
    prop3_residual: float


@dataclass(frozen=True, eq=False)
class IndexCertificate:
    t: int
    indices: list[int]  # 0-based row indices, best score first
    H_column_sq: np.ndarray
    l1_round_gap: np.ndarray
    r_i: np.ndarray
    row_sum_rounded: list[int]
    scores: np.ndarray
    score_sum: float
    hypothesis_met: bool
    h_column_ok: list[bool]
    l1_ok: list[bool]
    r_ok: list[bool]
    row_sum_ok: list[bool]

    @property
    def all_ok(self) -> bool:
        return all(self.h_column_ok) and all(self.l1_ok) and all(self.r_ok) and all(self.row_sum_ok)


@dataclass(frozen=True, eq=False)
class RoundedPair:
    indices: list[int]
    C: np.ndarray
    C_hat: np.ndarray
    y: np.ndarray
    gram_ok: bool
    gram_diag_defect: int
    gram_offdiag_defect: int
    y_norm_sq: float
    y_norm_ok: bool
    projection_gaps: np.ndarray
    gap_thresholds: tuple[float, float]
    gaps_ok: bool


@dataclass(frozen=True)
class ContradictionLedger:
    n: int
    t: int
    alpha_lower: float
    l1_upper: float
    mean_Cy_interval: tuple[float, float]
    mean_sq_lower: float
    ratio_ok: bool
    thresholds_ok: bool
    contradiction: bool


def _check_even(n: int) -> None:
    if n <= 2 or n % 2:
        raise DomainError(f"need even order n > 2, got {n}")


def _prepare(b):
    b = as_matrix(b, square=True)
    n = b.shape[0]
    _check_even(n)
    if np.any(b < 0):
        raise DomainError("matrix has negative entries")
    b_inv = invert(b).inverse
    return b, n, b_inv


def hypothesis_met(b: np.ndarray, b_inv: np.ndarray) -> bool:
    n = b.shape[0]
    return bool(np.max(b) <= 1 and np.linalg.norm(b_inv, "fro") <= sloane_constant(n))


def row_offset(n: int) -> float:
    """(n-1)^2 / (2(n-2)), the centre the row sums are measured from."""
    return (n - 1) ** 2 / (2 * (n - 2))


def round_half_up(b: np.ndarray) -> np.ndarray:
    return np.floor(b + 0.5)


def audit_prop(b, tolerance: float = 1e-9) -> PropAudit:
    b, n, b_inv = _prepare(b)
    ones = np.ones(n)
    r = b @ ones - row_offset(n) * ones
    c = h_upper(n) - h_value(b)
    h = build_fgh(b, b_inv).H

    lhs1 = r @ r + (n - 1) ** 2 / (n - 2) * np.sum(b * (1 - b))
    prop1 = abs(lhs1 - c * n / 4 - n / (4 * (n - 2) ** 2))

    prop2 = n * (n - 2) / (4 * (n - 1) ** 2) * (n * (n * n - 2 * n - 2) / ((n - 2) * (n + 1) ** 2) - c) \
        - float(np.sum(h * h))

    lhs3 = b @ (b.T + h)
    rhs3 = (n * n / (4 * (n - 1)) * np.eye(n)
            + (n - 1) ** 3 / (4 * n * (n - 2)) * np.ones((n, n))
            + (n - 1) / (2 * n) * (np.outer(r, ones) + np.outer(ones, r))
            + (n - 2) / (n * (n - 1)) * np.outer(r, r))
    prop3 = float(np.max(np.abs(lhs3 - rhs3)))

    met = hypothesis_met(b, b_inv)
    if met and not (-tolerance <= c < 1 + tolerance and prop2 >= -tolerance):
        log.warning("hypothesis holds but c=%r, prop2 margin=%r violate the derived bounds", c, prop2)
    return PropAudit(n=n, c=float(c), r=r, hypothesis_met=met, prop1_residual=float(prop1),
                     prop2_margin=float(prop2), prop3_residual=prop3)


def index_scores(b, b_inv: np.ndarray | None = None) -> np.ndarray:
    """Per-row score (4/n) r_i^2 + K sum_j B_ij(1-B_ij) + K sum_j H_ji^2, K = 4(n-1)^2/(n(n-2))."""
    b = as_matrix(b, square=True)
    n = b.shape[0]
    _check_even(n)
    h = build_fgh(b, b_inv).H
    r = b.sum(axis=1) - row_offset(n)
    k = 4 * (n - 1) ** 2 / (n * (n - 2))
    return 4 / n * r * r + k * np.sum(b * (1 - b), axis=1) + k * np.sum(h * h, axis=0)


def score_sum_bound(n: int) -> float:
    """1/(n-2)^2 + n(n^2-2n-2)/((n-2)(n+1)^2); below 1 for n >= 6."""
    return 1 / (n - 2) ** 2 + n * (n * n - 2 * n - 2) / ((n - 2) * (n + 1) ** 2)


def find_good_indices(b, t: int) -> IndexCertificate:
    b = as_matrix(b, square=True)
    n = b.shape[0]
    if t < 3 or n % 2 or n < 2 * t:
        raise DomainError(f"need t >= 3 and even n >= 2t, got n={n}, t={t}")
    if np.any(b < 0) or np.max(b) > 1:
        raise DomainError("entries must lie in [0, 1]")
    b_inv = invert(b).inverse
    h = build_fgh(b, b_inv).H
    scores = index_scores(b, b_inv)
    idx = [int(i) for i in np.argsort(scores, kind="stable")[: t + 1]]

    c = round_half_up(b)
    r = b.sum(axis=1) - row_offset(n)
    h_col = np.sum(h * h, axis=0)[idx]
    l1 = np.sum(np.abs(b - c), axis=1)[idx]
    r_sel = r[idx]
    rows_c = [int(x) for x in c.sum(axis=1)[idx]]

    gap = 1 / (4 * (n - t) - 2)
    # |r_i| rather than r_i: the two-sided form is what the rounding step actually delivers
    return IndexCertificate(
        t=t, indices=idx, H_column_sq=h_col, l1_round_gap=l1, r_i=r_sel, row_sum_rounded=rows_c,
        scores=scores[idx], score_sum=float(np.sum(scores)), hypothesis_met=hypothesis_met(b, b_inv),
        h_column_ok=[bool(x < 1 / (4 * (n - t))) for x in h_col],
        l1_ok=[bool(x <= gap) for x in l1],
        r_ok=[bool(abs(x) <= 1 / (2 * (n - 2)) + gap) for x in r_sel],
        row_sum_ok=[s * 2 == n for s in rows_c],
    )


def gap_thresholds(n: int, t: int) -> tuple[float, float]:
    """Bounds on |[C_hat y]_j - 1/4| (j <= t) and on |[C_hat y]_{t+1}|."""
    extra = 5 / (4 * (n - t)) + 1 / ((8 * (n - t) - 4) * math.sqrt(n - t))
    off = (n - 1) / (4 * (n - 2) * n) + extra
    diag = (2 * n * n - 4 * n + 1) / (4 * (n - 2) * (n - 1) * n) + extra
    return off, diag


def check_gram(c_hat, n: int) -> tuple[bool, int, int]:
    """Compare C_hat C_hat^T with ceil(n/4) I + floor(n/4) 11^T exactly.

    Returns (ok, max diagonal defect, max off-diagonal defect).
    """
    ch = np.rint(as_matrix(c_hat)).astype(np.int64)
    g = ch @ ch.T
    lo, hi = n // 4, -(-n // 4)
    diag = np.diag(g)
    off = g[~np.eye(g.shape[0], dtype=bool)]
    dd = int(np.max(np.abs(diag - (lo + hi))))
    od = int(np.max(np.abs(off - lo), initial=0))
    return dd == 0 and od == 0, dd, od


def _log_intermediate_constants(n: int, t: int) -> None:
    a = (n - 1) ** 3 / (4 * n * (n - 2))
    three = 1 / (2 * (n - t) - 1) + 1 / (2 * (n - 2)) + 1 / (4 * (n - t) - 2)
    seven = 5 / (4 * (n - t)) + 0.5 * math.sqrt(n / (n - t))
    frac = abs(a - round(a))
    log.debug("n=%d t=%d: three-term sum %.6g <= 5/(4(n-t)) = %.6g: %s", n, t, three, 5 / (4 * (n - t)),
              three <= 5 / (4 * (n - t)))
    log.debug("n=%d t=%d: off-diagonal deviation bound %.6g < 7/10: %s", n, t, seven, seven < 0.7)
    log.debug("n=%d: distance of %.6g to nearest integer %.6g < 3/10: %s", n, a, frac, frac < 0.3)


def extract_rounded_pair(b, t: int) -> RoundedPair:
    b = as_matrix(b, square=True)
    n = b.shape[0]
    if t < 4 or n % 2 or n < 4 * t:
        raise DomainError(f"need t >= 4 and even n >= 4t, got n={n}, t={t}")
    cert = find_good_indices(b, t)
    _log_intermediate_constants(n, t)
    h = build_fgh(b).H
    c = round_half_up(b)
    c_hat = c[cert.indices]
    sign = 1 if (n // 2 + 1) % 2 == 0 else -1
    y = sign * h[:, cert.indices[-1]]
    ok, dd, od = check_gram(c_hat, n)
    proj = c_hat @ y
    gaps = np.empty(t + 1)
    gaps[:t] = np.abs(proj[:t] - 0.25)
    gaps[t] = abs(proj[t])
    thr = gap_thresholds(n, t)
    y_sq = float(y @ y)
    return RoundedPair(
        indices=cert.indices, C=c, C_hat=c_hat, y=y, gram_ok=ok, gram_diag_defect=dd, gram_offdiag_defect=od,
        y_norm_sq=y_sq, y_norm_ok=y_sq <= 1 / (4 * (n - t)), projection_gaps=gaps, gap_thresholds=thr,
        gaps_ok=bool(np.all(gaps[:t] < thr[0]) and gaps[t] < thr[1]),
    )


# -- scalar contradiction chain ----------------------------------------------
# Everything below is exact rational arithmetic; square roots are enclosed by
# integer square roots so every comparison is rigorous.

_SQRT_SCALE = 10**15


def sqrt_bounds(x: Fraction) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(x) <= hi with hi - lo about 1e-15 relative."""
    if x < 0:
        raise DomainError("negative radicand")
    p, q = x.numerator, x.denominator
    s = math.isqrt(p * q * _SQRT_SCALE**2)
    den = q * _SQRT_SCALE
    return Fraction(s, den), Fraction(s + 1, den)


@lru_cache(maxsize=None)
def mean_sq_lower(t: int = 50, eps: Fraction = Fraction(1, 500)) -> Fraction:
    """Lower bound on the mean of [C_hat y]_i^2 when t entries sit within eps of 1/4."""
    return Fraction(t, t + 1) * (Fraction(1, 4) - eps) ** 2


@lru_cache(maxsize=None)
def mean_interval(t: int = 50, eps: Fraction = Fraction(1, 500)) -> tuple[Fraction, Fraction]:
    lo = Fraction(t, t + 1) * (Fraction(1, 4) - eps) - eps / (t + 1)
    hi = Fraction(t, t + 1) * (Fraction(1, 4) + eps) + eps / (t + 1)
    return lo, hi


def l1_upper_exact(n: int, t: int = 50) -> Fraction:
    """Upper bound on sqrt(n / (8(n-t)))."""
    return sqrt_bounds(Fraction(n, 8 * (n - t)))[1]


def thresholds_below(n: int, t: int, eps: Fraction) -> bool:
    """Both gap thresholds strictly below eps, evaluated rigorously."""
    m = n - t
    sqrt_lo = sqrt_bounds(Fraction(m))[0]
    extra = Fraction(5, 4 * m) + 1 / ((8 * m - 4) * sqrt_lo)
    off = Fraction(n - 1, 4 * (n - 2) * n) + extra
    diag = Fraction(2 * n * n - 4 * n + 1, 4 * (n - 2) * (n - 1) * n) + extra
    return off < eps and diag < eps


def alpha_lower_exact(n: int, t: int = 50, eps: Fraction = Fraction(1, 500)) -> Fraction:
    """Rigorous lower bound on alpha = 1^T y at order n.

    Uses the exact ratio n / ceil(n/4), the lower end of the mean interval in
    the linear term and the upper end inside the root.
    """
    q = -(-n // 4)
    rho = Fraction(n, q)
    m_lo, m_hi = mean_interval(t, eps)
    s_lo = mean_sq_lower(t, eps)
    inner = Fraction(n, 4 * (t + 1) * (n - t)) - rho * s_lo + rho * rho / 4 * m_hi * m_hi
    root_hi = sqrt_bounds(max(inner, Fraction(0)))[1]
    return rho / 2 * m_lo - root_hi


def uniform_alpha_lower(t: int = 50, eps: Fraction = Fraction(1, 500), n0: int = 1000) -> Fraction:
    """The n-uniform chain value: ratio floored at 1 - 1/(n0/2 + 1), radicand at n = n0."""
    shrink = 1 - Fraction(1, n0 // 2 + 1)
    m_lo, m_hi = mean_interval(t, eps)
    s_lo = mean_sq_lower(t, eps)
    inner = Fraction(n0, 4 * (t + 1) * (n0 - t)) - 4 * shrink * s_lo + 4 * m_hi * m_hi
    return 2 * shrink * m_lo - sqrt_bounds(inner)[1]


def contradiction_row(n: int, t: int = 50, eps: Fraction = Fraction(1, 500)) -> ContradictionLedger:
    if n < 1000 or n % 2:
        raise DomainError(f"chain needs even n >= 1000, got {n}")
    q = -(-n // 4)
    ratio = Fraction(n, 4 * q)
    ratio_ok = 1 - Fraction(1, 501) <= ratio <= 1
    thr_ok = thresholds_below(n, t, eps)
    alpha = alpha_lower_exact(n, t, eps)
    l1 = l1_upper_exact(n, t)
    m_lo, m_hi = mean_interval(t, eps)
    return ContradictionLedger(
        n=n, t=t, alpha_lower=float(alpha), l1_upper=float(l1), mean_Cy_interval=(float(m_lo), float(m_hi)),
        mean_sq_lower=float(mean_sq_lower(t, eps)), ratio_ok=ratio_ok, thresholds_ok=thr_ok,
        contradiction=bool(ratio_ok and thr_ok and alpha - eps > l1),
    )


def _scan_chunk(ns):
    return [contradiction_row(n) for n in ns]


def contradiction_scan(n_min: int, n_max: int, workers: int | None = None) -> list[ContradictionLedger]:
    """Replay the chain for every even n in [n_min, n_max], ordered by n."""
    if n_min % 2 or n_max % 2:
        raise DomainError("range endpoints must be even")
    if n_min < 1000:
        raise DomainError("n_min must be >= 1000")
    if n_max < n_min:
        raise DomainError("n_max < n_min")
    ns = list(range(n_min, n_max + 1, 2))
    if workers is None:
        workers = int(os.environ.get("SMATRIX_THREADS", "1") or 1)
    if workers <= 1 or len(ns) < 2000:
        return _scan_chunk(ns)
    size = -(-len(ns) // workers)
    chunks = [ns[i:i + size] for i in range(0, len(ns), size)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return [row for part in ex.map(_scan_chunk, chunks) for row in part]


def scan_csv(rows: list[ContradictionLedger]) -> str:
    lines = ["n,alpha_lower,l1_upper,contradiction"]
    lines.extend(f"{r.n},{r.alpha_lower!r},{r.l1_upper!r},{str(r.contradiction).lower()}" for r in rows)
    return "\n".join(lines) + "\n"


def full_audit(b) -> dict:
    """Every audit that applies to B's order; used to preserve a would-be counterexample."""
    b = as_matrix(b, square=True)
    n = b.shape[0]
    out: dict = {}
    if n > 2 and n % 2 == 0 and np.all(b >= 0):
        b = b / np.max(b)
        out["prop"] = audit_prop(b)
        if n >= 6:
            out["indices"] = find_good_indices(b, 3)
        if n >= 16:
            out["rounded"] = extract_rounded_pair(b, 4)
    return out
