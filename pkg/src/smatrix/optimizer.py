"""Projected-gradient search for small ||A^{-1}||_F over the box [0, 1]^{n x n}."""
from __future__ import annotations

import configparser
import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
from scipy.linalg import lapack

from .bounds import sloane_constant
from .constructions import smatrix, smatrix_constructible
from .errors import DomainError, IllConditionedError, SingularError, SizeCapError
from .matrix_core import as_matrix, lu_rcond

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    n: int
    starts: int = 16
    max_iters: int = 2000
    step_init: float = 0.1
    step_shrink: float = 0.5
    singularity_floor: float = 1e-10
    seed: int = 0
    tolerance: float = 1e-7

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("n must be >= 2")
        if self.starts < 1 or self.max_iters < 1:
            raise DomainError("starts and max_iters must be positive")
        if not self.step_init > 0 or not 0 < self.step_shrink < 1:
            raise DomainError("need step_init > 0 and 0 < step_shrink < 1")
        if not self.singularity_floor > 0 or not self.tolerance > 0:
            raise DomainError("singularity_floor and tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class OptimizerRun:
    best_matrix: np.ndarray
    best_value: float
    bound: float
    gap: float
    iterations_used: int
    converged: bool
    start_index: int
    trajectory: list[float]  # ||A^{-1}||_F after each accepted step of the winning start


def read_config(path, **overrides) -> OptimizerConfig:
    """Load ``key = value`` lines (``#`` comments allowed); keyword overrides win."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.read_string("[optimizer]\n" + Path(path).read_text())
    types = {f.name: f.type for f in fields(OptimizerConfig)}
    kwargs = {}
    for key, raw in parser["optimizer"].items():
        if key not in types:
            raise DomainError(f"unknown config key {key!r}")
        kwargs[key] = int(raw) if types[key] == "int" else float(raw)
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    if "n" not in kwargs:
        raise DomainError("config must set n")
    return OptimizerConfig(**kwargs)


def _inverse(a: np.ndarray, floor: float) -> np.ndarray:
    try:
        lu, piv, rcond = lu_rcond(a)
    except SingularError as exc:
        raise IllConditionedError(str(exc)) from exc
    if rcond < floor:
        raise IllConditionedError(f"reciprocal condition {rcond:.3e} below {floor:.0e}")
    inv, _ = lapack.dgetri(lu, piv)
    return inv


def objective_and_gradient(a, singularity_floor: float = 1e-10) -> tuple[float, np.ndarray]:
    """(||A^{-1}||_F^2, -2 A^{-T} A^{-1} A^{-T})"""
    a = as_matrix(a, square=True)
    x = _inverse(a, singularity_floor)
    return float(np.sum(x * x)), -2.0 * x.T @ x @ x.T


def projected_gradient_norm(a: np.ndarray, grad: np.ndarray) -> float:
    """Gradient norm with components zeroed where a box face blocks descent."""
    g = grad.copy()
    g[(a <= 0.0) & (g > 0)] = 0.0
    g[(a >= 1.0) & (g < 0)] = 0.0
    return float(np.linalg.norm(g))


def binary_oracle(n: int) -> tuple[float, list[np.ndarray]]:
    """Exhaustive minimum of ||A^{-1}||_F over invertible 0/1 matrices, n <= 4."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if n > 4:
        raise SizeCapError(f"n={n} exceeds exhaustive cap 4")
    codes = np.arange(2 ** (n * n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n * n)) & 1
    mats = bits.reshape(-1, n, n).astype(np.float64)
    # 0/1 determinants of order <= 4 are small integers, so rounding is exact
    dets = np.rint(np.linalg.det(mats))
    mats = mats[dets != 0]
    vals = np.sqrt(np.sum(np.linalg.inv(mats) ** 2, axis=(1, 2)))
    best = float(np.min(vals))
    winners = [m for m, v in zip(mats, vals) if v <= best * (1 + 1e-12)]
    return best, winners


def warm_starts(n: int) -> list[np.ndarray]:
    out = [np.eye(n)]
    if n <= 3:
        out.append(binary_oracle(n)[1][0])
    if n % 4 == 3 and smatrix_constructible(n):
        out.append(smatrix(n).body)
    return out


def start_matrix(config: OptimizerConfig, index: int, warm: list[np.ndarray]) -> np.ndarray:
    if index < len(warm):
        return warm[index].copy()
    # Philox is counter-based: start k draws from its own jumped stream, independent of the others
    rng = np.random.Generator(np.random.Philox(key=config.seed).jumped(index))
    return rng.random((config.n, config.n))


def descend(a: np.ndarray, config: OptimizerConfig, callback=None):
    """Run one projected-gradient descent.

    Returns (A, objective, iterations, converged, trajectory) where the
    objective is ||A^{-1}||_F^2 and the trajectory holds ||A^{-1}||_F per
    accepted iterate. ``callback(A, objective)`` sees every accepted iterate.
    """
    floor = config.singularity_floor
    a = np.clip(a, 0.0, 1.0)
    val, grad = objective_and_gradient(a, floor)
    traj = [math.sqrt(val)]
    if callback is not None:
        callback(a, val)
    step = config.step_init
    for it in range(1, config.max_iters + 1):
        if projected_gradient_norm(a, grad) < config.tolerance:
            return a, val, it - 1, True, traj
        # normalize so the trial step length is in units of entries, not gradient scale
        direction = grad / max(float(np.max(np.abs(grad))), 1e-300)
        accepted = False
        while step > 1e-14:
            trial = np.clip(a - step * direction, 0.0, 1.0)
            try:
                tval, tgrad = objective_and_gradient(trial, floor)
            except IllConditionedError:
                step *= config.step_shrink
                continue
            if tval <= val:
                accepted = True
                break
            step *= config.step_shrink
        if not accepted:
            return a, val, it, False, traj
        a, val, grad = trial, tval, tgrad
        traj.append(math.sqrt(val))
        if callback is not None:
            callback(a, val)
        step = min(step / config.step_shrink, 1.0)
    return a, val, config.max_iters, projected_gradient_norm(a, grad) < config.tolerance, traj


def _run_start(args):
    config, index = args
    warm = warm_starts(config.n)
    a0 = start_matrix(config, index, warm)
    try:
        a, val, iters, conv, traj = descend(a0, config)
    except IllConditionedError:
        log.info("start %d: singular initial point, skipped", index)
        return None
    return index, a, math.sqrt(val), iters, conv, traj


def projected_gradient_minimize(config: OptimizerConfig, workers: int = 1) -> OptimizerRun:
    """Multi-start projected gradient descent; best over starts, ties to lowest start index."""
    jobs = [(config, i) for i in range(config.starts)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_start, jobs))
    else:
        results = [_run_start(j) for j in jobs]
    bound = sloane_constant(config.n)
    best = None
    for res in results:
        if res is None:
            continue
        if best is None or res[2] < best[2]:
            best = res
    if best is None:
        return OptimizerRun(best_matrix=np.full((config.n, config.n), np.nan), best_value=math.inf, bound=bound,
                            gap=math.inf, iterations_used=0, converged=False, start_index=-1, trajectory=[])
    index, a, value, iters, conv, traj = best
    return OptimizerRun(best_matrix=a, best_value=value, bound=bound, gap=value - bound,
                        iterations_used=iters, converged=conv, start_index=index, trajectory=traj)

