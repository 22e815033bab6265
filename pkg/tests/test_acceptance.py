"""Acceptance criteria, each at its stated tolerance and time budget."""
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from smatrix.bounds import bound_report, build_fgh, h_upper, h_value, proposition_ratio
from smatrix.cli import run_command
from smatrix.constructions import is_prime, paley_hadamard, smatrix, smatrix_constructible, sylvester_hadamard
from smatrix.lemma_audit import (audit_prop, contradiction_row, contradiction_scan, l1_upper_exact, mean_interval,
                                 mean_sq_lower, uniform_alpha_lower)
from smatrix.matrix_core import finite_diff_gradient
from smatrix.optimizer import OptimizerConfig, binary_oracle, descend, objective_and_gradient, start_matrix, \
    warm_starts

from oracles import row_col_permutations_of


@pytest.fixture
def detail(record_property):
    return lambda text: record_property("detail", text)


@pytest.mark.criterion(1, "S-matrix equality ||S^-1||_F ||S||_max = 2q/(q+1)")
def test_c1_smatrix_equality(detail):
    t0 = time.perf_counter()
    orders = [q for q in range(3, 200, 4) if smatrix_constructible(q)]
    worst = 0.0
    for q in orders:
        s = smatrix(q).body
        value = proposition_ratio(s)
        ref = np.linalg.norm(np.linalg.inv(s)) * s.max()  # independent inverse
        worst = max(worst, abs(value - 2 * q / (q + 1)), abs(ref - 2 * q / (q + 1)))
        assert bound_report(s).equality_class.value == "SMatrixEquality"
    elapsed = time.perf_counter() - t0
    detail(f"{len(orders)} orders {orders[0]}..{orders[-1]}, max deviation {worst:.2e}, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert {3, 7, 11, 19, 23, 31, 199} <= set(orders)
    assert elapsed < 5


@pytest.mark.criterion(2, "Hadamard equality ||H^-1||_F ||H||_max = 1")
def test_c2_hadamard_equality(detail):
    mats = [sylvester_hadamard(k) for k in range(1, 11)]
    mats += [paley_hadamard(q) for q in range(3, 200) if is_prime(q) and q % 4 == 3]
    worst = max(abs(proposition_ratio(h.body) - 1) for h in mats)
    detail(f"Sylvester orders 2..1024 and {len(mats) - 10} Paley orders 4..200, max deviation {worst:.2e}")
    assert max(h.order for h in mats if h.order <= 200) == 200
    assert worst <= 1e-9


@pytest.mark.criterion(3, "identity suite on random non-negative matrices")
def test_c3_identity_suite(detail):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240601)
    worst = dict(fg=0.0, ff=0.0, p1=0.0, p3=0.0)
    count = 0
    for n in (4, 6, 8, 12, 20):
        done = 0
        while done < 200:
            a = rng.random((n, n))
            try:
                t = build_fgh(a)
            except ArithmeticError:
                continue
            inv_sq = float(np.sum(np.linalg.inv(a) ** 2))
            fg = n * (n * n - 2) / (n - 2)
            ff = 2 * n + n**3 / (4 * (n - 2)) * inv_sq
            worst["fg"] = max(worst["fg"], abs(np.vdot(t.F, t.G) - fg) / fg)
            worst["ff"] = max(worst["ff"], abs(np.vdot(t.F, t.F) - ff) / ff)
            audit = audit_prop(a)
            worst["p1"] = max(worst["p1"], audit.prop1_residual)
            worst["p3"] = max(worst["p3"], audit.prop3_residual)
            done += 1
        count += done
    elapsed = time.perf_counter() - t0
    detail(f"{count} matrices: <F,G> rel {worst['fg']:.1e}, ||F||^2 rel {worst['ff']:.1e}, "
           f"prop(1) {worst['p1']:.1e}, prop(3) {worst['p3']:.1e}, {elapsed:.2f}s")
    assert count >= 1000
    assert worst["fg"] <= 1e-8 and worst["ff"] <= 1e-8
    assert worst["p1"] <= 1e-7 and worst["p3"] <= 1e-7
    assert elapsed < 30


@pytest.mark.criterion(4, "h(A) <= n(n^2-2n+2)/(n-2), equality at binary row sums n/2")
def test_c4_h_bound(detail):
    n = 4
    codes = np.arange(2**16, dtype=np.int64)
    mats = ((codes[:, None] >> np.arange(16)) & 1).reshape(-1, 4, 4)
    # exact integer form: n(n-2) h = 4(n-1)^2 sum A^2 - 4(n-2) sum r^2
    scaled = 4 * (n - 1) ** 2 * mats.sum(axis=(1, 2)) - 4 * (n - 2) * (mats.sum(axis=2) ** 2).sum(axis=1)
    cap = n * n * (n * n - 2 * n + 2)
    assert np.all(scaled <= cap)
    exact_eq = scaled == cap
    half_rows = np.all(mats.sum(axis=2) == n // 2, axis=1)
    assert np.array_equal(exact_eq, half_rows)
    floats = np.array([h_value(m) for m in mats.astype(float)])
    assert np.all(floats <= h_upper(4) + 1e-9)
    assert np.array_equal(np.abs(floats - h_upper(4)) <= 1e-9, half_rows)
    worst = {}
    rng = np.random.default_rng(7)
    for m in (4, 6):
        excess = max(h_value(a) - h_upper(m) for a in rng.random((100_000, m, m)))
        worst[m] = excess
        assert excess <= 1e-9
    detail(f"65536 binary 4x4: {int(half_rows.sum())} equality cases, all with row sums 2; "
           f"max h - bound over 1e5 random: n=4 {worst[4]:.3f}, n=6 {worst[6]:.3f}")


@pytest.mark.criterion(5, "scalar contradiction chain for even n in [1000, 100000]")
def test_c5_contradiction_replay(detail):
    t0 = time.perf_counter()
    rows = contradiction_scan(1000, 100_000)
    elapsed = time.perf_counter() - t0
    assert len(rows) == 49_501 and all(r.contradiction for r in rows)
    assert math.sqrt(1000 / 7600) < 0.37 and l1_upper_exact(1000) < Fraction(37, 100)
    assert contradiction_row(1000).l1_upper == pytest.approx(math.sqrt(1000 / 7600), rel=1e-12)
    assert mean_sq_lower() == Fraction(1922, 31875)
    assert mean_interval() == (Fraction(6199, 25500), Fraction(6301, 25500))
    alpha = uniform_alpha_lower()
    assert alpha > Fraction(39, 100)
    detail(f"{len(rows)} rows all true, min alpha {min(r.alpha_lower for r in rows):.6f}, "
           f"max l1 {max(r.l1_upper for r in rows):.6f}, uniform alpha {float(alpha):.6f}, {elapsed:.2f}s")
    assert elapsed < 10


@pytest.mark.criterion(6, "optimizer recovers odd optima and never beats 2n/(n+1)")
def test_c6_optimizer(detail, tmp_path):
    t0 = time.perf_counter()
    best = {}
    for n in range(2, 17):
        out = tmp_path / f"n{n}.json"
        code = run_command(["optimize", "--n", str(n), "--starts", "32", "--seed", "0", "--out", str(out),
                            "--artifact", str(tmp_path / f"cx{n}.json")])
        rep = json.loads(out.read_text())
        assert code == 0, f"n={n} exited {code}"
        assert rep["gap"] >= -1e-6
        assert rep["best_value"] >= 2 * n / (n + 1) - 1e-6
        best[n] = rep["best_value"]
    assert abs(best[3] - 1.5) <= 1e-3
    assert abs(best[7] - 1.75) <= 1e-3
    assert abs(best[2] - math.sqrt(2)) <= 1e-3
    # random starts alone, without warm starts, for the odd targets
    random_best = {}
    for n in (3, 7):
        cfg = OptimizerConfig(n=n)
        w = len(warm_starts(n))
        random_best[n] = min(math.sqrt(descend(start_matrix(cfg, k, []), cfg)[1]) for k in range(w, w + 32))
    elapsed = time.perf_counter() - t0
    detail("best per n: " + ", ".join(f"{n}:{v:.4f}" for n, v in best.items()))
    detail(f"random starts only: n=3 {random_best[3]:.6f}, n=7 {random_best[7]:.6f}; {elapsed:.1f}s")
    assert elapsed < 120


@pytest.mark.criterion(7, "binary oracle minimizers for n = 2, 3")
def test_c7_oracle(detail):
    def as_set(mats):
        return {np.asarray(m, dtype=np.float64).tobytes() for m in mats}

    b3, w3 = binary_oracle(3)
    b2, w2 = binary_oracle(2)
    assert b3 == pytest.approx(1.5, abs=1e-12)
    assert as_set(w3) == as_set(row_col_permutations_of(np.ones((3, 3)) - np.eye(3)))
    assert b2 == pytest.approx(math.sqrt(2), abs=1e-12)
    assert as_set(w2) == as_set(row_col_permutations_of(np.eye(2)))
    detail(f"n=3 minimum {b3!r} over {len(w3)} minimizers; n=2 minimum {b2!r} over {len(w2)} minimizers")


@pytest.mark.criterion(8, "analytic gradient of ||A^-1||_F^2 vs central differences")
def test_c8_gradient(detail):
    rng = np.random.default_rng(11)
    worst = 0.0
    for n in range(2, 11):
        done = 0
        while done < 100:
            a = rng.random((n, n))
            if np.linalg.cond(a) > 50:
                continue
            _, g = objective_and_gradient(a)
            fd = finite_diff_gradient(lambda x: objective_and_gradient(x)[0], a, 1e-5)
            worst = max(worst, float(np.linalg.norm(g - fd) / np.linalg.norm(g)))
            done += 1
    detail(f"900 matrices with cond_2 <= 50, worst relative error {worst:.2e}")
    assert worst <= 1e-6
