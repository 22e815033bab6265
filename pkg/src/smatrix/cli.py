"""Command-line front end.

Exit codes: 0 success, 1 domain/validation/input error, 2 usage error,
3 counterexample found (an artifact was written).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import constructions as cons
from .bounds import EqualityClass, bound_report
from .errors import DomainError, SMatrixError
from .lemma_audit import audit_prop, contradiction_scan, extract_rounded_pair, find_good_indices, full_audit, scan_csv
from .matrix_core import format_csv_int, format_matrix, read_matrix, write_matrix
from .optimizer import OptimizerConfig, binary_oracle, projected_gradient_minimize, read_config
from .serialize import dumps

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3
COUNTEREXAMPLE_MARGIN = 1e-6

KINDS = ("hadamard-sylvester", "hadamard-paley", "smatrix-qr", "smatrix-from-hadamard", "smatrix")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SMATRIX_THREADS", "1")))
    except ValueError:
        return 1


def _emit_json(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_counterexample(a: np.ndarray, report, artifact: Path) -> Path:
    """Preserve a would-be counterexample losslessly: matrix text plus every audit."""
    matrix_path = artifact.with_suffix(".txt")
    write_matrix(a, matrix_path)
    payload = {"matrix_file": matrix_path.name, "matrix": format_matrix(a), "bound_report": report}
    try:
        payload["audits"] = full_audit(a)
    except SMatrixError as exc:
        payload["audits"] = {"error": str(exc)}
    artifact.write_text(dumps(payload))
    return matrix_path


def cmd_construct(args) -> int:
    kind, n = args.kind, args.order
    if kind == "hadamard-sylvester":
        k = n.bit_length() - 1
        if n < 1 or 1 << k != n:
            raise DomainError(f"Sylvester order must be a power of two, got {n}")
        body = cons.sylvester_hadamard(k).body
    elif kind == "hadamard-paley":
        body = cons.paley_hadamard(n - 1).body
    elif kind == "smatrix-qr":
        body = cons.quadratic_residue_smatrix(n).body
    elif kind == "smatrix-from-hadamard":
        body = cons.smatrix_from_hadamard(cons.hadamard(n + 1)).body
    else:
        body = cons.smatrix(n).body
    text = format_csv_int(body) if args.format == "csv" else format_matrix(body)
    valid = cons.is_hadamard(body) if kind.startswith("hadamard") else cons.is_smatrix(body)
    if args.out:
        Path(args.out).write_text(text)
        print(f"{kind} order {n}: validated={valid}, written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if valid else EXIT_ERROR


def cmd_check(args) -> int:
    if args.tolerance < 0:
        raise DomainError("tolerance must be non-negative")
    a = read_matrix(args.input)
    rep = bound_report(a, args.tolerance, signed=args.signed)
    print(f"n={rep.n} ||A^-1||_F={rep.inv_frobenius!r} bound={rep.sloane_bound!r} "
          f"slack={rep.slack_vs_sloane!r} class={rep.equality_class.value}")
    if args.out:
        _emit_json(rep, args.out)
    if rep.equality_class is EqualityClass.BELOW_CONJECTURE:
        artifact = Path(args.artifact) if args.artifact else Path(args.input).with_suffix(".counterexample.json")
        mpath = _write_counterexample(a, rep, artifact)
        print(f"COUNTEREXAMPLE: artifact {artifact}, matrix {mpath}")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_audit(args) -> int:
    a = read_matrix(args.input)
    if args.lemma == "prop":
        res = audit_prop(a)
        print(f"n={res.n} c={res.c!r} hypothesis_met={res.hypothesis_met} prop1={res.prop1_residual:.3e} "
              f"prop2_margin={res.prop2_margin!r} prop3={res.prop3_residual:.3e}")
    elif args.lemma == "indices":
        res = find_good_indices(a, args.t if args.t is not None else 3)
        print(f"t={res.t} indices={res.indices} score_sum={res.score_sum!r} all_ok={res.all_ok} "
              f"hypothesis_met={res.hypothesis_met}")
    else:
        res = extract_rounded_pair(a, args.t if args.t is not None else 4)
        print(f"indices={res.indices} gram_ok={res.gram_ok} y_norm_ok={res.y_norm_ok} gaps_ok={res.gaps_ok}")
    if args.out:
        _emit_json(res, args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    rows = contradiction_scan(args.from_, args.to, workers=_threads())
    text = scan_csv(rows)
    bad = [r.n for r in rows if not r.contradiction]
    if args.out:
        Path(args.out).write_text(text)
        print(f"scanned {len(rows)} even n in [{args.from_}, {args.to}]; contradiction fails at {bad or 'none'}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if not bad else EXIT_ERROR


def cmd_optimize(args) -> int:
    overrides = dict(n=args.n, starts=args.starts, seed=args.seed, max_iters=args.max_iters)
    if args.config:
        cfg = read_config(args.config, **overrides)
    else:
        if args.n is None:
            raise DomainError("--n is required without --config")
        cfg = OptimizerConfig(**{k: v for k, v in overrides.items() if v is not None})
    run = projected_gradient_minimize(cfg, workers=_threads())
    print(f"n={cfg.n} best={run.best_value!r} bound={run.bound!r} gap={run.gap!r} "
          f"start={run.start_index} iters={run.iterations_used} converged={run.converged}")
    if args.out:
        _emit_json(run, args.out)
        mpath = Path(args.matrix_out) if args.matrix_out else Path(args.out).with_suffix(".matrix.txt")
        if np.all(np.isfinite(run.best_matrix)):
            write_matrix(run.best_matrix, mpath)
    elif args.matrix_out and np.all(np.isfinite(run.best_matrix)):
        write_matrix(run.best_matrix, args.matrix_out)
    if run.gap < -COUNTEREXAMPLE_MARGIN:
        artifact = Path(args.artifact or f"counterexample-n{cfg.n}-seed{cfg.seed}.json")
        rep = bound_report(run.best_matrix)
        mpath = _write_counterexample(run.best_matrix, rep, artifact)
        print(f"COUNTEREXAMPLE: artifact {artifact}, matrix {mpath}")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_oracle(args) -> int:
    best, winners = binary_oracle(args.n)
    print(f"n={args.n} minimum={best!r} minimizers={len(winners)}")
    if args.out:
        _emit_json({"n": args.n, "minimum": best, "minimizers": winners}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smatrix", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("construct", help="build a Hadamard matrix or S-matrix")
    c.add_argument("--kind", choices=KINDS, required=True)
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--format", choices=("text", "csv"), default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("check", help="bound report for a matrix file")
    c.add_argument("--input", required=True)
    c.add_argument("--tolerance", type=float, default=1e-8)
    c.add_argument("--signed", action="store_true", help="allow negative entries (Hadamard bound only)")
    c.add_argument("--out")
    c.add_argument("--artifact", help="where to write a counterexample artifact")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("audit", help="lemma audits for an even-order matrix file")
    c.add_argument("--input", required=True)
    c.add_argument("--lemma", choices=("prop", "indices", "rounded"), required=True)
    c.add_argument("--t", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_audit)

    c = sub.add_parser("scan", help="replay the scalar contradiction chain")
    c.add_argument("--from", dest="from_", type=int, required=True)
    c.add_argument("--to", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_scan)

    c = sub.add_parser("optimize", help="projected-gradient minimization of ||A^-1||_F")
    c.add_argument("--n", type=int)
    c.add_argument("--starts", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--max-iters", type=int)
    c.add_argument("--config")
    c.add_argument("--out")
    c.add_argument("--matrix-out")
    c.add_argument("--artifact")
    c.set_defaults(func=cmd_optimize)

    c = sub.add_parser("oracle", help="exhaustive binary minimum for n <= 4")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_oracle)
    return p


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (SMatrixError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
