"""Command line interface.

Subcommands: apply, moduli, verify, decompose, identity-check,
extremal-scan, compare-normal.  Matrices travel as JSON objects
``{"rows": r, "cols": c, "entries": [[re, im], ...]}`` (row-major);
reports are JSON, per-trial and scan data are CSV.

Exit codes: 0 success (or bound not applicable), 1 bound or identity
violated, 2 configuration/parse errors, 3 numerical failures, 4 input
not doubly substochastic.  SVCALC_THREADS caps verification worker
threads (default 1).
"""

import argparse
import json
import sys

import numpy as np

from .cdss import NotCdssError, decompose, distance_identity_check
from .functions import _parse_kv, extremal_ratio, lipschitz_moduli, parse_function
from .linalg import (
    frobenius_norm,
    hadamard,
    load_matrix,
    matrix_to_json,
    random_unitary,
)
from .svfc import apply_svfc, compare_normal, linear_map, monomial, plane_from_scalar
from .verify import TrialConfig, scalar_tightness, verify_bound

__all__ = ["main"]


def _write_text(path, text):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_plane(text):
    """Plane-function DSL: ``mono:k=N``, ``linear:re=..,im=..``, or any
    scalar-function DSL extended to the plane by ``z -> f(max(Re z, 0))``
    (intended for positive semidefinite input)."""
    s = str(text).strip()
    name = s.partition(":")[0].strip().lower()
    argtext = s.partition(":")[2]
    if name == "mono":
        kv = _parse_kv(argtext, {"k"}, "mono")
        if "k" not in kv:
            raise ValueError("mono requires k")
        k = kv["k"]
        if k != int(k) or k < 1:
            raise ValueError(f"mono: k must be a positive integer, got {k!r}")
        return monomial(int(k))
    if name == "linear":
        kv = _parse_kv(argtext, {"re", "im"}, "linear")
        return linear_map(complex(kv.get("re", 0.0), kv.get("im", 0.0)))
    return plane_from_scalar(parse_function(s))


def _cmd_apply(args):
    f = parse_function(args.f)
    m = load_matrix(args.infile)
    out = apply_svfc(f, m, tol_rank=args.tol)
    _write_text(args.out, matrix_to_json(out) + "\n")
    return 0


def _cmd_moduli(args):
    f = parse_function(args.f)
    moduli = lipschitz_moduli(f, domain_cap=args.cap, grid=args.grid)
    payload = {"function": f.to_dsl(), **moduli.to_dict()}
    _write_text(args.out, json.dumps(payload) + "\n")
    return 0


def _cmd_verify(args):
    cfg = TrialConfig(
        function=parse_function(args.f),
        dimension=args.dim,
        trials=args.trials,
        seed=args.seed,
        matrix_scale=args.scale,
        perturbation_scale=args.perturbation,
    )
    report = verify_bound(cfg, tol_bound=args.tol)
    _write_text(args.out, report.to_json() + "\n")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.trials_csv())
    return 1 if report.passed is False else 0


def _cmd_decompose(args):
    if args.infile and args.random_unitary:
        raise ValueError("give either --in or --random-unitary, not both")
    if args.random_unitary:
        d, seed = args.random_unitary
        # Hadamard product of a Haar unitary with a conjugated independent
        # one: the standard way such matrices arise, and always cdss.
        m = hadamard(random_unitary(d, seed), np.conj(random_unitary(d, seed + 1)))
    elif args.infile:
        m = load_matrix(args.infile)
    else:
        raise ValueError("decompose needs --in or --random-unitary")
    dec = decompose(m, tol=args.tol)
    err = frobenius_norm(dec.reconstruct() - m)
    text = json.dumps(dec.to_dict()) + "\n"
    if args.out:
        _write_text(args.out, text)
        print(f"terms: {dec.n_terms}  reconstruction error: {err:.3e}")
    else:
        sys.stdout.write(text)
        print(f"terms: {dec.n_terms}  reconstruction error: {err:.3e}", file=sys.stderr)
    return 0


def _cmd_identity_check(args):
    if (args.infile is None) != (args.in_b is None):
        raise ValueError("identity-check needs both --in and --in-b, or neither")
    if args.infile:
        pairs = [(load_matrix(args.infile), load_matrix(args.in_b))]
    else:
        rng = np.random.default_rng(args.seed)
        d = args.dim
        pairs = []
        for _ in range(args.trials):
            a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
            b = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
            pairs.append((a, b))
    max_error = 0.0
    ok = True
    for a, b in pairs:
        lhs, rhs = distance_identity_check(a, b)
        err = abs(lhs - rhs)
        max_error = max(max_error, err)
        ok = ok and err <= args.tol * (1.0 + lhs)
    payload = {
        "pairs": len(pairs),
        "max_error": max_error,
        "tol": args.tol,
        "pass": ok,
    }
    _write_text(args.out, json.dumps(payload) + "\n")
    return 0 if ok else 1


def _cmd_extremal_scan(args):
    if not (0.0 < args.t_min <= args.t_max):
        raise ValueError("need 0 < t-min <= t-max")
    if args.points < 1:
        raise ValueError("points must be >= 1")
    if args.points == 1:
        ts = [args.t_min]
    else:
        ts = np.logspace(np.log10(args.t_min), np.log10(args.t_max), args.points)
    lines = ["t,extremal_ratio,scalar_tightness"]
    for t in ts:
        t = float(t)
        lines.append(f"{t!r},{extremal_ratio(t)!r},{scalar_tightness(t)!r}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_compare_normal(args):
    f_plane = _parse_plane(args.f)
    m = load_matrix(args.infile)
    report = compare_normal(f_plane, m, tol_identity=args.tol)
    payload = {"function": args.f, **report.to_dict()}
    _write_text(args.out, json.dumps(payload) + "\n")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="svcalc",
        description="Singular value functional calculus and sharp Lipschitz bound tools.",
        epilog=(
            "exit codes: 0 ok, 1 bound/identity violated, 2 bad configuration, "
            "3 numerical failure, 4 not doubly substochastic"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply a scalar function to a matrix's singular values")
    p.add_argument("--f", required=True, metavar="DSL", help="e.g. soft:tau=1.5 or scale:re=0,im=2")
    p.add_argument("--in", dest="infile", required=True, help="input matrix JSON path")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--tol", type=float, default=1e-12, help="relative rank cutoff (default 1e-12)")
    p.set_defaults(handler=_cmd_apply)

    p = sub.add_parser("moduli", help="Lipschitz and complex rotation moduli of a scalar function")
    p.add_argument("--f", required=True, metavar="DSL")
    p.add_argument("--cap", type=float, default=None, help="sampling cap (default: 10x largest breakpoint)")
    p.add_argument("--grid", type=int, default=64, help="sampling grid density (default 64)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(handler=_cmd_moduli)

    p = sub.add_parser("verify", help="randomized verification of the sharp Lipschitz bound")
    p.add_argument("--f", required=True, metavar="DSL")
    p.add_argument("--dim", type=int, default=8, help="matrix dimension (default 8)")
    p.add_argument("--trials", type=int, default=1000, help="trial count (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--scale", type=float, default=1.0, help="matrix scale (default 1)")
    p.add_argument("--perturbation", type=float, default=1e-3, help="perturbation scale (default 1e-3)")
    p.add_argument("--tol", type=float, default=1e-9, help="relative bound slack (default 1e-9)")
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.add_argument("--csv", help="optional per-trial CSV path")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("decompose", help="permutation-phase decomposition of a cdss matrix")
    p.add_argument("--in", dest="infile", help="input matrix JSON path")
    p.add_argument(
        "--random-unitary",
        nargs=2,
        type=int,
        metavar=("D", "SEED"),
        help="use the Hadamard product of two seeded Haar unitaries as input",
    )
    p.add_argument("--tol", type=float, default=1e-12, help="substochastic slack (default 1e-12)")
    p.add_argument("--out", help="decomposition JSON path (default stdout)")
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("identity-check", help="check the singular-value distance identity")
    p.add_argument("--in", dest="infile", help="first matrix JSON path")
    p.add_argument("--in-b", dest="in_b", help="second matrix JSON path")
    p.add_argument("--dim", type=int, default=6, help="dimension for random pairs (default 6)")
    p.add_argument("--trials", type=int, default=20, help="random pair count (default 20)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--tol", type=float, default=1e-8, help="relative identity tolerance (default 1e-8)")
    p.add_argument("--out", help="JSON result path (default stdout)")
    p.set_defaults(handler=_cmd_identity_check)

    p = sub.add_parser("extremal-scan", help="tabulate the extremal ratio approaching sqrt(2)")
    p.add_argument("--t-min", type=float, default=1e-6, help="smallest parameter (default 1e-6)")
    p.add_argument("--t-max", type=float, default=1e-1, help="largest parameter (default 1e-1)")
    p.add_argument("--points", type=int, default=25, help="log-spaced sample count (default 25)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(handler=_cmd_extremal_scan)

    p = sub.add_parser("compare-normal", help="singular value vs classical calculus on a normal matrix")
    p.add_argument("--f", required=True, metavar="DSL", help="mono:k=N, linear:re=..,im=.., or scalar DSL")
    p.add_argument("--in", dest="infile", required=True, help="input matrix JSON path")
    p.add_argument("--tol", type=float, default=1e-8, help="equality tolerance (default 1e-8)")
    p.add_argument("--out", help="JSON result path (default stdout)")
    p.set_defaults(handler=_cmd_compare_normal)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except NotCdssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
