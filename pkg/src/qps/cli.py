"""Command line entry point: ``qps {fano,wigner,rep,moments,verify}``.

Exit codes: 0 success, 1 an identity was violated, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL
from .exceptions import QPSError, StateFormatError
from .fano import build_fano_grid
from .representation import Family, PhaseChoice, build_unitary, classify_phase_choice
from .sl2z import validate_sl2
from .verify import SUITES, run_suites
from .wigner import load_state, moment_identity, wigner_document, wigner_transform, write_wigner_csv

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _num(x: float) -> str:
    return f"{x:.17g}"


def default_tolerance() -> float:
    raw = os.environ.get("QPS_TOLERANCE")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(f"qps: error: QPS_TOLERANCE={raw!r} is not a number") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    dim: int
    family: Family
    n_plus: int
    n_minus: int
    tol: float
    seed: int
    out: str
    output: str | None
    options: argparse.Namespace

    @property
    def phase_choice(self) -> PhaseChoice:
        return PhaseChoice(self.n_plus, self.n_minus, self.dim)


def _int_list(text: str, count: int, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} must be {count} comma-separated integers") from None
    if len(values) != count:
        raise argparse.ArgumentTypeError(f"{what} must be {count} comma-separated integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, required=True, help="state-space dimension N")
    common.add_argument("--family", choices=[f.value for f in (Family.NEW, Family.LEONHARDT)],
                        help="Fano family (default: new)")
    common.add_argument("--nplus", type=int, help="representation parameter n+")
    common.add_argument("--nminus", type=int, help="representation parameter n-")
    common.add_argument("--tol", type=float, default=None,
                        help="deviation tolerance (default: $QPS_TOLERANCE or 1e-10)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", choices=["csv", "json"], default="csv", help="output format")
    common.add_argument("--output", metavar="PATH", help="write to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="qps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fano", parents=[common], help="dump Fano operators")
    p.add_argument("--point", type=lambda s: _int_list(s, 2, "--point"), metavar="DQ,DP",
                   help="single cell in doubled coordinates")

    p = sub.add_parser("wigner", parents=[common], help="Wigner grid of a state file")
    p.add_argument("--state", required=True, metavar="FILE")

    p = sub.add_parser("rep", parents=[common], help="representation unitary U_h")
    p.add_argument("--h", required=True, type=lambda s: _int_list(s, 4, "--h"),
                   metavar="KAPPA,MU,LAM,NU", help="h = [[kappa, mu], [lam, nu]], row-major")

    p = sub.add_parser("moments", parents=[common], help="moment identity deviations")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", action="append", choices=["all", *SUITES],
                   help="suite to run (repeatable, default all)")
    return parser


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.dim < 1 or (ns.command in ("rep", "verify") and ns.dim < 2):
        parser.error(f"--dim {ns.dim} is too small for '{ns.command}'")
    if (ns.nplus is None) != (ns.nminus is None):
        parser.error("--nplus and --nminus must be given together")
    if ns.family is not None:
        family = Family(ns.family)
        if family is Family.LEONHARDT and ns.dim % 2:
            parser.error(f"the leonhardt family requires even --dim, got {ns.dim}")
    else:
        family = None
    if ns.nplus is not None:
        cls = classify_phase_choice(PhaseChoice(ns.nplus, ns.nminus, ns.dim))
        if family is not None and cls is not family:
            parser.error(f"--nplus {ns.nplus} --nminus {ns.nminus} is {cls.value}, "
                         f"inconsistent with --family {family.value}")
        if cls is Family.INADMISSIBLE and ns.command != "rep":
            parser.error(f"'{ns.command}' needs an admissible phase class, got {cls.value}")
        family = cls if family is None else family
        n_plus, n_minus = ns.nplus, ns.nminus
    else:
        family = family or Family.NEW
        pc = PhaseChoice.for_family(family, ns.dim)
        n_plus, n_minus = pc.n_plus, pc.n_minus
    if ns.command == "moments":
        for name in ("a", "b"):
            v = getattr(ns, name)
            if v is not None and not 0 <= v < ns.dim:
                parser.error(f"--{name} must lie in [0, {ns.dim})")
    if ns.command == "fano" and ns.point is not None:
        if not all(0 <= v < 2 * ns.dim for v in ns.point):
            parser.error(f"--point must lie in [0, {2 * ns.dim})")
    tol = ns.tol if ns.tol is not None else default_tolerance()
    return RunConfig(ns.command, ns.dim, family, n_plus, n_minus, tol, ns.seed,
                     ns.out, ns.output, ns)


def _matrix_pairs(M) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(M).ravel()]


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _dump(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def run_fano(cfg: RunConfig) -> tuple[int, str]:
    grid = build_fano_grid(cfg.family, cfg.dim)
    points = [cfg.options.point] if cfg.options.point else list(grid.points())
    if cfg.out == "json":
        doc = {"dim": cfg.dim, "family": cfg.family.value, "cells": [
            {"dq": dq, "dp": dp, "matrix": _matrix_pairs(grid.cell(dq, dp))} for dq, dp in points
        ]}
        return EXIT_OK, _dump(doc)
    rows = []
    for dq, dp in points:
        cell = grid.cell(dq, dp)
        for (i, j), z in np.ndenumerate(cell):
            rows.append([dq, dp, f"{dq / 2:.1f}", f"{dp / 2:.1f}", i, j, _num(z.real), _num(z.imag)])
    return EXIT_OK, _csv(rows, ["dq", "dp", "q", "p", "row", "col", "re", "im"])


def run_wigner(cfg: RunConfig) -> tuple[int, str]:
    rho = load_state(cfg.options.state)
    if rho.dim != cfg.dim:
        raise StateFormatError(f"state file has dim {rho.dim}, --dim is {cfg.dim}")
    W = wigner_transform(rho, build_fano_grid(cfg.family, cfg.dim), tol=cfg.tol)
    if cfg.out == "json":
        return EXIT_OK, _dump(wigner_document(W))
    return EXIT_OK, write_wigner_csv(W)


def run_rep(cfg: RunConfig) -> tuple[int, str]:
    kappa, mu, lam, nu = cfg.options.h
    h = validate_sl2([[kappa, mu], [lam, nu]])
    rep = build_unitary(h, cfg.phase_choice)
    residuals = rep.residuals()
    code = EXIT_OK if max(residuals.values()) < cfg.tol else EXIT_VIOLATION
    if cfg.out == "json":
        doc = {
            "dim": cfg.dim, "h": [list(r) for r in h.as_rows()],
            "n_plus": cfg.n_plus, "n_minus": cfg.n_minus, "family": cfg.family.value,
            "matrix": _matrix_pairs(rep.U), "residuals": residuals,
        }
        return code, _dump(doc)
    rows = [[i, j, _num(z.real), _num(z.imag)] for (i, j), z in np.ndenumerate(rep.U)]
    for name, value in residuals.items():
        print(f"# {name} residual {value:.3e}", file=sys.stderr)
    return code, _csv(rows, ["row", "col", "re", "im"])


def run_moments(cfg: RunConfig) -> tuple[int, str]:
    grid = build_fano_grid(cfg.family, cfg.dim)
    a_values = [cfg.options.a] if cfg.options.a is not None else range(cfg.dim)
    b_values = [cfg.options.b] if cfg.options.b is not None else range(cfg.dim)
    results = [(a, b, moment_identity(grid, a, b).deviation) for a in a_values for b in b_values]
    code = EXIT_OK if all(dev < cfg.tol for *_, dev in results) else EXIT_VIOLATION
    if cfg.out == "json":
        doc = {"dim": cfg.dim, "family": cfg.family.value,
               "moments": [{"a": a, "b": b, "deviation": dev} for a, b, dev in results]}
        return code, _dump(doc)
    return code, _csv([[a, b, f"{dev:.6e}"] for a, b, dev in results], ["a", "b", "deviation"])


def run_verify(cfg: RunConfig) -> tuple[int, str]:
    results = run_suites(cfg.options.suite or ["all"], cfg.dim, cfg.tol, cfg.seed)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION
    if cfg.out == "json":
        doc = {"dim": cfg.dim, "tol": cfg.tol, "passed": code == EXIT_OK, "checks": [
            {"suite": r.suite, "check": r.name, "deviation": r.deviation,
             "threshold": r.threshold, "passed": r.passed} for r in results
        ]}
        return code, _dump(doc)
    lines = [f"{'suite':<13}{'check':<48}{'deviation':>10}  threshold  status"]
    lines += [r.row() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return code, "\n".join(lines) + "\n"


COMMANDS = {
    "fano": run_fano,
    "wigner": run_wigner,
    "rep": run_rep,
    "moments": run_moments,
    "verify": run_verify,
}


def execute(cfg: RunConfig) -> int:
    try:
        code, text = COMMANDS[cfg.command](cfg)
    except StateFormatError as exc:
        print(f"qps: error: {exc.identity}: {exc}", file=sys.stderr)
        return EXIT_IO
    except QPSError as exc:
        print(f"qps: error: {exc.identity} violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except OSError as exc:
        print(f"qps: error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"qps: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


def main(argv=None) -> int:
    return execute(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
