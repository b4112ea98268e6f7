"""Batch command-line front end.

Subcommands read a matrix-pair JSON file, run a decomposition or check,
and print a machine-readable JSON report with the tolerances echoed.
Exit codes partition outcomes: 0 success, 2 input error, 3 proven
nonexistence, 4 unknown or algorithmic failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .dcmatrix import DCMatrix
from .complex_linalg import DEFAULT_CLUSTER_GAP
from .dcnum import DEFAULT_TOL
from .decompositions import (
    DEFAULT_RECON_TOL,
    JsvdStatus,
    attempt_jordan_svd,
    jsvd_to_polar,
    naive_dc_svd,
    penrose_check,
    pinv_exists,
    _jordan_pinv,
)
from .errors import NoPseudoinverse, TessarineError
from .explorer import PROFILES, conjecture_scan
from .pairfile import PairFormatError, load_pair, pair_to_obj

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_EXISTS = 3
EXIT_UNKNOWN = 4


def _default_seed() -> int:
    env = os.environ.get("TESSARINE_SEED")
    try:
        return int(env) if env else 0
    except ValueError:
        return 0


def _add_common(p: argparse.ArgumentParser, with_seed: bool = True):
    p.add_argument("input", help="matrix-pair JSON file")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="equality/rank tolerance (default 1e-9)")
    p.add_argument("--recon-tol", type=float, default=DEFAULT_RECON_TOL,
                   help="reconstruction acceptance tolerance (default 1e-7)")
    p.add_argument("--cluster-gap", type=float, default=DEFAULT_CLUSTER_GAP,
                   help="relative eigenvalue clustering gap (default 1e-6)")
    if with_seed:
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help="rng seed (default: $TESSARINE_SEED or 0)")
        p.add_argument("--max-retries", type=int, default=16,
                       help="retry bound for the randomized extension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tessarine",
        description="Double-complex matrix decompositions and existence checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("check", help="existence report for a pair"),
                with_seed=True)
    _add_common(sub.add_parser("pinv", help="Moore-Penrose pseudoinverse"))
    _add_common(sub.add_parser("jsvd", help="Jordan SVD factors"))
    _add_common(sub.add_parser("svd", help="naive diagonal SVD factors"))
    _add_common(sub.add_parser("polar", help="polar decomposition factors"))

    ex = sub.add_parser("explore", help="randomized scan of the open problems")
    ex.add_argument("--trials", type=int, default=100)
    ex.add_argument("--profile", default="dense,ranks",
                    help=f"comma-separated profiles from {PROFILES}")
    ex.add_argument("--n", type=int, default=5, help="max matrix dimension")
    ex.add_argument("--seed", type=int, default=_default_seed())
    ex.add_argument("--out", default="explore.ndjson",
                    help="NDJSON record stream path")
    ex.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ex.add_argument("--cluster-gap", type=float, default=DEFAULT_CLUSTER_GAP)
    return parser


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _tolerances(args) -> dict:
    return {
        "tol": args.tol,
        "recon_tol": getattr(args, "recon_tol", None),
        "cluster_gap": args.cluster_gap,
    }


def _load(args) -> DCMatrix:
    return load_pair(args.input)


def cmd_check(args) -> int:
    m = _load(args)
    _, report = attempt_jordan_svd(
        m,
        args.tol,
        np.random.default_rng(args.seed),
        recon_tol=args.recon_tol,
        cluster_gap=args.cluster_gap,
        max_retries=args.max_retries,
    )
    _emit({"command": "check", "tolerances": _tolerances(args),
           **report.as_dict()})
    return EXIT_OK


def _status_exit(report) -> int:
    if report.jsvd_status is JsvdStatus.NOT_EXISTS:
        return EXIT_NOT_EXISTS
    return EXIT_UNKNOWN


def cmd_jsvd(args) -> int:
    m = _load(args)
    jsvd, report = attempt_jordan_svd(
        m,
        args.tol,
        np.random.default_rng(args.seed),
        recon_tol=args.recon_tol,
        cluster_gap=args.cluster_gap,
        max_retries=args.max_retries,
    )
    if jsvd is None:
        _emit({"command": "jsvd", "tolerances": _tolerances(args),
               "error": report.reason, **report.as_dict()})
        return _status_exit(report)
    _emit({
        "command": "jsvd",
        "tolerances": _tolerances(args),
        "residual": jsvd.residual,
        "j_blocks": [[b.real, b.imag, s] for b, s in jsvd.blocks],
        "U": pair_to_obj(jsvd.u),
        "S": pair_to_obj(jsvd.s),
        "V": pair_to_obj(jsvd.v),
        **report.as_dict(),
    })
    return EXIT_OK


def cmd_pinv(args) -> int:
    m = _load(args)
    exists, ranks = pinv_exists(m, args.tol)
    if not exists:
        _emit({"command": "pinv", "tolerances": _tolerances(args),
               "error": f"no pseudoinverse: rank(A,B,AB,BA) = {list(ranks)}"})
        return EXIT_NOT_EXISTS
    jsvd, report = attempt_jordan_svd(
        m,
        args.tol,
        np.random.default_rng(args.seed),
        recon_tol=args.recon_tol,
        cluster_gap=args.cluster_gap,
        max_retries=args.max_retries,
    )
    if jsvd is None:
        _emit({"command": "pinv", "tolerances": _tolerances(args),
               "error": report.reason})
        return _status_exit(report)
    j_pinv = _jordan_pinv(jsvd.blocks)
    k = jsvd.v @ DCMatrix(j_pinv, j_pinv) @ jsvd.u.star()
    axioms = penrose_check(m, k, args.recon_tol)
    if not all(axioms):
        _emit({"command": "pinv", "tolerances": _tolerances(args),
               "error": f"VerificationFailed: axioms {list(axioms)}"})
        return EXIT_UNKNOWN
    residual = (m @ k @ m - m).norm_inf()
    _emit({
        "command": "pinv",
        "tolerances": _tolerances(args),
        "penrose_axioms": list(axioms),
        "residual": residual,
        "pinv": pair_to_obj(k),
    })
    return EXIT_OK


def cmd_svd(args) -> int:
    m = _load(args)
    try:
        u, s, v = naive_dc_svd(m, args.tol, recon_tol=args.recon_tol)
    except TessarineError as ex:
        _emit({"command": "svd", "tolerances": _tolerances(args),
               "error": f"{type(ex).__name__}: {ex}"})
        return EXIT_UNKNOWN
    residual = (u @ s @ v.star() - m).norm_inf()
    _emit({
        "command": "svd",
        "tolerances": _tolerances(args),
        "residual": residual,
        "U": pair_to_obj(u),
        "S": pair_to_obj(s),
        "V": pair_to_obj(v),
    })
    return EXIT_OK


def cmd_polar(args) -> int:
    m = _load(args)
    jsvd, report = attempt_jordan_svd(
        m,
        args.tol,
        np.random.default_rng(args.seed),
        recon_tol=args.recon_tol,
        cluster_gap=args.cluster_gap,
        max_retries=args.max_retries,
    )
    if jsvd is None:
        _emit({"command": "polar", "tolerances": _tolerances(args),
               "error": report.reason, **report.as_dict()})
        return _status_exit(report)
    pd = jsvd_to_polar(jsvd)
    residual = (pd.reconstruct() - m).norm_inf()
    _emit({
        "command": "polar",
        "tolerances": _tolerances(args),
        "residual": residual,
        "unitary_factor": pair_to_obj(pd.unitary_factor),
        "hermitian_factor": pair_to_obj(pd.hermitian_factor),
    })
    return EXIT_OK


def cmd_explore(args) -> int:
    profiles = tuple(p.strip() for p in args.profile.split(",") if p.strip())
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            def sink(rec):
                fh.write(json.dumps(rec.as_dict()))
                fh.write("\n")

            _, summary = conjecture_scan(
                trials=args.trials,
                profiles=profiles,
                n_max=args.n,
                seed=args.seed,
                tol=args.tol,
                cluster_gap=args.cluster_gap,
                sink=sink,
            )
    except TessarineError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    _emit({"command": "explore", "out": args.out, "seed": args.seed,
           **summary.as_dict()})
    return EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "pinv": cmd_pinv,
    "jsvd": cmd_jsvd,
    "svd": cmd_svd,
    "polar": cmd_polar,
    "explore": cmd_explore,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (PairFormatError, FileNotFoundError, IsADirectoryError) as ex:
        print(f"input error: {ex}", file=sys.stderr)
        return EXIT_INPUT
    except NoPseudoinverse as ex:
        print(f"not exists: {ex}", file=sys.stderr)
        return EXIT_NOT_EXISTS
    except TessarineError as ex:
        print(f"{type(ex).__name__}: {ex}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
