"""Hadamard and S-matrix constructions with exact validators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalError, NotPrimeError, ResidueClassError, SizeCapError
from .matrix_core import as_matrix

MAX_SYLVESTER_K = 13
MAX_PALEY_Q = 10007


def _integer_entries(a: np.ndarray):
    """Integer copy of ``a`` or None if any entry is not an exact integer."""
    ints = np.rint(a)
    if not np.array_equal(ints, a):
        return None
    return ints.astype(np.int64)


def _exact_gram(ints: np.ndarray) -> np.ndarray:
    """A^T A for an integer matrix, computed exactly."""
    bound = ints.shape[0] * int(np.max(np.abs(ints), initial=0)) ** 2
    if bound < 2**53:
        # every partial sum is an integer below 2**53, so BLAS float products are exact
        f = ints.astype(np.float64)
        return np.rint(f.T @ f).astype(np.int64)
    return ints.T @ ints


def is_hadamard(a) -> bool:
    a = as_matrix(a, square=True)
    n = a.shape[0]
    ints = _integer_entries(a)
    if ints is None or not np.all(np.abs(ints) == 1):
        return False
    return bool(np.array_equal(_exact_gram(ints), n * np.eye(n, dtype=np.int64)))


def is_smatrix(a) -> bool:
    """0/1 entries and A^T A = ((n+1)/4)(I + 11^T), checked as 4 A^T A = (n+1)(I + J)."""
    a = as_matrix(a, square=True)
    n = a.shape[0]
    ints = _integer_entries(a)
    if ints is None or not np.all((ints == 0) | (ints == 1)):
        return False
    target = (n + 1) * (np.eye(n, dtype=np.int64) + 1)
    return bool(np.array_equal(4 * _exact_gram(ints), target))


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    order: int
    body: np.ndarray

    def __post_init__(self):
        if self.body.shape != (self.order, self.order) or not is_hadamard(self.body):
            raise InternalError(f"body of order {self.order} is not a Hadamard matrix")


@dataclass(frozen=True, eq=False)
class SMatrix:
    order: int
    body: np.ndarray

    def __post_init__(self):
        if self.body.shape != (self.order, self.order) or not is_smatrix(self.body):
            raise InternalError(f"body of order {self.order} is not an S-matrix")


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _check_paley_prime(q: int) -> None:
    if not is_prime(q):
        raise NotPrimeError(f"{q} is not prime")
    if q % 4 != 3:
        raise ResidueClassError(f"{q} is not 3 mod 4")
    if q > MAX_PALEY_Q:
        raise SizeCapError(f"q={q} exceeds cap {MAX_PALEY_Q}")


def quadratic_character(q: int) -> np.ndarray:
    """chi[d] = Legendre symbol (d/q) for d in 0..q-1."""
    chi = -np.ones(q, dtype=np.int64)
    chi[(np.arange(1, q, dtype=np.int64) ** 2) % q] = 1
    chi[0] = 0
    return chi


def sylvester_hadamard(k: int) -> HadamardMatrix:
    if k < 0:
        raise DomainError("k must be non-negative")
    if k > MAX_SYLVESTER_K:
        raise SizeCapError(f"k={k} exceeds cap {MAX_SYLVESTER_K} (order 8192)")
    h = np.ones((1, 1))
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return HadamardMatrix(order=h.shape[0], body=h)


def paley_hadamard(q: int) -> HadamardMatrix:
    """Paley type I: H = I + [[0, 1^T], [-1, Q]] with Q the Jacobsthal matrix of GF(q)."""
    _check_paley_prime(q)
    chi = quadratic_character(q)
    idx = np.arange(q)
    jac = chi[(idx[None, :] - idx[:, None]) % q]
    s = np.zeros((q + 1, q + 1), dtype=np.int64)
    s[0, 1:] = 1
    s[1:, 0] = -1
    s[1:, 1:] = jac
    h = (np.eye(q + 1, dtype=np.int64) + s).astype(np.float64)
    return HadamardMatrix(order=q + 1, body=h)


def normalize_hadamard(h: np.ndarray) -> np.ndarray:
    """Negate rows then columns so the first row and column are all +1."""
    h = h * h[:, :1]
    return h * h[:1, :]


def smatrix_from_hadamard(h: HadamardMatrix) -> SMatrix:
    if h.order < 4 or h.order % 4:
        raise DomainError(f"need a Hadamard order >= 4 divisible by 4, got {h.order}")
    norm = normalize_hadamard(h.body)
    if not (np.all(norm[0] == 1) and np.all(norm[:, 0] == 1)):
        raise InternalError("normalization failed")
    core = norm[1:, 1:]
    return SMatrix(order=h.order - 1, body=(core == -1).astype(np.float64))


def quadratic_residue_smatrix(q: int) -> SMatrix:
    """Circulant S-matrix of prime order q = 3 mod 4.

    The residue circulant has row sums (q-1)/2; its complement (support
    {0} plus the non-residues) is the one satisfying the Gram identity.
    """
    _check_paley_prime(q)
    chi = quadratic_character(q)
    idx = np.arange(q)
    qr = (chi[(idx[None, :] - idx[:, None]) % q] == 1).astype(np.float64)
    for cand in (qr, 1.0 - qr, 1.0 - qr - np.eye(q), qr + np.eye(q)):
        if is_smatrix(cand):
            return SMatrix(order=q, body=cand)
    raise InternalError(f"no residue-circulant variant of order {q} is an S-matrix")


def smatrix(order: int) -> SMatrix:
    """Any constructible S-matrix of the given order.

    Prime orders use the residue circulant; orders 2^k - 1 use Sylvester.
    """
    if is_prime(order) and order % 4 == 3:
        return quadratic_residue_smatrix(order)
    k = (order + 1).bit_length() - 1
    if order >= 3 and (1 << k) == order + 1:
        return smatrix_from_hadamard(sylvester_hadamard(k))
    raise DomainError(f"no S-matrix construction available for order {order}")


def smatrix_constructible(order: int) -> bool:
    if is_prime(order) and order % 4 == 3 and order <= MAX_PALEY_Q:
        return True
    return order >= 3 and (order + 1) & order == 0 and order + 1 <= 1 << MAX_SYLVESTER_K


def hadamard(order: int) -> HadamardMatrix:
    """Any constructible Hadamard matrix of the given order (Sylvester first, then Paley)."""
    if order >= 1 and (order & (order - 1)) == 0:
        return sylvester_hadamard(order.bit_length() - 1)
    q = order - 1
    if is_prime(q) and q % 4 == 3:
        return paley_hadamard(q)
    raise DomainError(f"no Hadamard construction available for order {order}")
