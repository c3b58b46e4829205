"""``momentkit`` command line: validate, momentum and verify.

Exit codes are 0 (pass), 1 (a check failed) and 2 (usage or input error).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import moment as mm
from .lie import central_extension, validate
from .models import ModelError, resolve_model
from .numeric import DEFAULT_TOL, Tolerance, random_state
from .verify import DEFAULT_MODELS, SUITES, run_verify, suite_rng

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_seed() -> int:
    raw = os.environ.get("MOMENTKIT_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"MOMENTKIT_SEED must be an integer, got {raw!r}") from None


def _tolerance(args) -> Tolerance:
    try:
        return Tolerance(
            abs_tol=DEFAULT_TOL.abs_tol if args.tol_abs is None else args.tol_abs,
            rel_tol=DEFAULT_TOL.rel_tol,
            nullspace_tol=DEFAULT_TOL.nullspace_tol if args.tol_null is None else args.tol_null,
            fd_step=DEFAULT_TOL.fd_step if args.fd_step is None else args.fd_step,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".15g")


# ------------------------------------------------------------------ validate

def cmd_validate(args) -> int:
    tol = _tolerance(args)
    rep = resolve_model(args.model, strict=False, tol=tol)
    report = validate(rep, tol)
    lines = [f"# model {rep.name}  threshold {report.threshold:.1e}", "kind,index,residual,pass"]
    for r in report.records:
        idx = "-".join(str(i + 1) for i in r.index) or "all"
        lines.append(f"{r.kind},{idx},{r.residual:.6e},{int(r.residual <= report.threshold)}")
    failures = report.failures()
    for r in failures:
        where = ", ".join(str(i + 1) for i in r.index)
        lines.append(f"# FAIL {r.kind} ({where}) residual {r.residual:.3e}")
    lines.append(f"# overall={'PASS' if report.passed else 'FAIL'}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


# ------------------------------------------------------------------ momentum

def read_states(path, n: int) -> list:
    """Rows of ``2n`` interleaved real/imaginary values; ``#`` lines are skipped."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    states = []
    for k, row in enumerate(rows, 1):
        try:
            vals = np.array([float(x) for x in row if x.strip() != ""])
        except ValueError:
            raise UsageError(f"{path}: row {k} is not numeric") from None
        if vals.size != 2 * n:
            raise UsageError(f"{path}: row {k} has {vals.size} values, expected {2 * n}")
        states.append((f"row{k}", vals[0::2] + 1j * vals[1::2]))
    return states


def momentum_rows(ext, states, tol: Tolerance = DEFAULT_TOL):
    """Yield ``(state_id, row_or_None)``; ``None`` marks a rejected zero state."""
    for sid, psi in states:
        nrm = np.linalg.norm(psi)
        if nrm == 0 or not np.isfinite(nrm):
            yield sid, None
            continue
        psi = psi / nrm
        mu = mm.momentum(ext, psi)
        stab = mm.stabilizer(ext, psi, tol)
        ker = mm.momentum_kernel(ext, psi, tol)
        yield sid, [*mu.coords, stab.dim, ker.dim]


def cmd_momentum(args) -> int:
    tol = _tolerance(args)
    rep = resolve_model(args.model, strict=True, tol=tol)
    ext = central_extension(rep)
    n = ext.hdim
    if args.states is not None:
        states = read_states(args.states, n)
    else:
        if args.samples < 0:
            raise UsageError("--samples must be >= 0")
        states = [(f"e{k + 1}", np.eye(n, dtype=complex)[k]) for k in range(n)]
        rng = suite_rng(args.seed, args.model, "momentum")
        states += [(f"s{k + 1}", random_state(rng, n, ext.safe_levels)) for k in range(args.samples)]
    names = list(rep.algebra.basis_names) + ["center"]
    buf = io.StringIO()
    buf.write("state," + ",".join(f"mu_{x}" for x in names) + ",stab_dim,ker_dim\n")
    rejected = []
    for sid, row in momentum_rows(ext, states, tol):
        if row is None:
            rejected.append(sid)
            continue
        coords, sdim, kdim = row[:-2], row[-2], row[-1]
        buf.write(sid + "," + ",".join(_fmt(c) for c in coords) + f",{sdim},{kdim}\n")
    _emit(buf.getvalue(), args.out)
    for sid in rejected:
        print(f"momentkit: state {sid} is zero and was rejected", file=sys.stderr)
    return EXIT_USAGE if rejected else EXIT_OK


# ------------------------------------------------------------------ verify

def parse_suites(text: str | None) -> tuple:
    if text is None or text.strip() in ("", "all"):
        return SUITES
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in SUITES]
    if bad:
        raise UsageError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}")
    return names


def cmd_verify(args) -> int:
    tol = _tolerance(args)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    suites = parse_suites(args.suites)
    addresses = args.model or list(DEFAULT_MODELS)
    models = {a: resolve_model(a, strict=False, tol=tol) for a in addresses}
    report = run_verify(models, suites, args.samples, args.seed, tol)
    _emit(report.to_csv(), args.out)
    for suite, s in report.summary().items():
        print(f"{suite:13s} checks={s['checks']:6d} failed={s['failed']:5d} max_residual={s['max_residual']:.3e}",
              file=sys.stderr)
    print(f"overall: {'PASS' if report.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="momentkit", description="Momentum maps of finite-dimensional unitary representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, many_models=False):
        if many_models:
            p.add_argument("--model", action="append", help="model address (repeatable); default: the four zoo models")
        else:
            p.add_argument("--model", required=True, help="builder:params (su2:1, torus:3, weyl:12) or file:path")
        p.add_argument("--seed", type=int, default=None, help="64-bit seed (default: $MOMENTKIT_SEED or 0)")
        p.add_argument("--tol-abs", type=float, default=None)
        p.add_argument("--tol-null", type=float, default=None)
        p.add_argument("--fd-step", type=float, default=None)
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("validate", help="check anti-Hermiticity, closure, Jacobi and the cocycle identity")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("momentum", help="momentum coordinates, stabilizer and kernel dimensions")
    common(p)
    p.add_argument("--states", default=None, help="CSV of interleaved re/im rows (default: basis states)")
    p.add_argument("--samples", type=int, default=0, help="random states appended after the basis states")
    p.set_defaults(func=cmd_momentum)

    p = sub.add_parser("verify", help="run the verification suites and write a CSV report")
    common(p, many_models=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--suites", default=None, help=f"comma list from {','.join(SUITES)} (default: all)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        return args.func(args)
    except (UsageError, ModelError) as exc:
        print(f"momentkit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
