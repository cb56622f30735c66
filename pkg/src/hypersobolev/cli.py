"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on structural
errors in the input, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import constructors as cons
from .gelfand import NotSubhypergroupError, commutativity_residual, make_pair
from .hypergroup import (
    DEFAULT_TOL,
    AxiomError,
    HypergroupError,
    StructuralError,
    compute_haar,
    exact_haar,
    validate_axioms,
)
from .io import (
    SchemaError,
    complex_pair,
    dumps,
    load,
    parse_cayley,
    parse_coefficients,
    parse_function,
    read_json,
    serialize,
)
from .sobolev import (
    DEFAULT_SLACK,
    GAMMA_PRESETS,
    ParameterError,
    SobolevParams,
    embedding_sweep,
    gamma_preset,
    sobolev_norm,
)
from .spectral import (
    compute_dual,
    fourier,
    inverse_fourier,
    plancherel_residual,
    random_biinvariant,
)

EXIT_OK, EXIT_FAIL, EXIT_STRUCTURAL, EXIT_USAGE = 0, 1, 2, 64
PLANCHEREL_TOL = 1e-10

STRUCTURAL_ERRORS = (SchemaError, StructuralError, NotSubhypergroupError, ParameterError,
                     cons.GroupAxiomError, FileNotFoundError, IndexError)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numeric tolerance (default %(default)g)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--project", action="store_true", help="project functions onto K-bi-invariant ones")
    return p


def _pair_args(p: argparse.ArgumentParser):
    p.add_argument("file")
    p.add_argument("--k", nargs="+", default=None, metavar="LABELS",
                   help="labels of the subhypergroup K, comma or space separated (default: identity)")


def _trial_args(p: argparse.ArgumentParser, default_trials: int):
    p.add_argument("--trials", type=int, default=default_trials)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = Parser(prog="hypersobolev", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("validate", parents=[common], help="check the hypergroup axioms")
    p.add_argument("file")

    p = sub.add_parser("haar", parents=[common], help="solve for Haar weights")
    p.add_argument("file")

    p = sub.add_parser("make", parents=[common], help="write a canonical hypergroup file")
    p.add_argument("family", choices=("cyclic", "hamming", "s3", "s3-classes", "group", "classes"))
    p.add_argument("params", nargs="*", help="n for cyclic, d for hamming, a Cayley table file for group/classes")
    p.add_argument("-o", "--output")

    p = sub.add_parser("cosets", parents=[common], help="double cosets and the quotient hypergroup")
    _pair_args(p)

    p = sub.add_parser("dual", parents=[common], help="spherical characters and Plancherel weights")
    _pair_args(p)

    p = sub.add_parser("fourier", parents=[common], help="spherical Fourier transform of a function file")
    _pair_args(p)
    p.add_argument("--f", required=True, metavar="FNFILE")

    p = sub.add_parser("ifourier", parents=[common], help="inverse transform of a coefficient file")
    _pair_args(p)
    p.add_argument("--f", required=True, metavar="COEFFFILE")

    p = sub.add_parser("plancherel", parents=[common], help="Plancherel identity on random functions")
    _pair_args(p)
    _trial_args(p, 100)
    p.add_argument("--f", metavar="FNFILE", help="check one function instead of random trials")

    p = sub.add_parser("sobolev", aliases=["sobolev-norm"], parents=[common], help="Sobolev norm of a function file")
    _pair_args(p)
    _gamma_args(p)
    p.add_argument("--f", required=True, metavar="FNFILE")

    p = sub.add_parser("embed-report", parents=[common], help="embedding inequalities on random functions")
    _pair_args(p)
    _gamma_args(p)
    p.add_argument("--sigma", type=float)
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    _trial_args(p, 100)
    return parser


def _gamma_args(p: argparse.ArgumentParser):
    p.add_argument("--gamma", default="zero", help=f"preset ({', '.join(GAMMA_PRESETS)}) or JSON file")
    p.add_argument("--gamma-block", metavar="LABEL", help="block label for the spectral-gap preset")
    p.add_argument("--s", type=float, required=True)


def _split_labels(values) -> list:
    if values is None:
        return None
    return [label for v in values for label in v.split(",") if label]


def _pair(args):
    G = load(args.file, tol=args.tol)
    labels = _split_labels(args.k)
    K = G.indices(labels) if labels else None
    return make_pair(G, K, tol=args.tol)


def _emit(out, obj):
    out.write(json.dumps(obj) + "\n")


def _csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _gamma(args, pair, dual) -> np.ndarray:
    if args.gamma in GAMMA_PRESETS:
        block = None
        if args.gamma_block is not None:
            block = pair.partition.block_of[pair.G.index(args.gamma_block)]
        return gamma_preset(args.gamma, pair, dual, block)
    doc = read_json(args.gamma)
    if isinstance(doc, dict):
        doc = doc.get("gamma")
    if not isinstance(doc, list):
        raise SchemaError("gamma file must be a JSON array of nonnegative numbers")
    return np.array(doc, dtype=float)


def cmd_validate(args, out) -> int:
    H = load(args.file, validate=False)
    report = validate_axioms(H, args.tol)
    if args.format == "csv":
        _csv(out, ["axiom", "pass", "residual"],
             [[k, report.passed[k], repr(float(v))] for k, v in report.residuals.items()])
    else:
        _emit(out, {"file": Path(args.file).name, "labels": list(H.labels), **report.to_dict()})
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_haar(args, out) -> int:
    H = load(args.file, validate=False)
    try:
        h = compute_haar(H, args.tol)
    except HypergroupError as exc:
        _emit(out, {"pass": False, "error": str(exc)})
        return EXIT_FAIL
    residual = float(np.max(np.abs(np.einsum("x,yxz->yz", h, H.c) - h[None, :])))
    exact = exact_haar(H, h)
    result = {
        "haar": {label: float(w) for label, w in zip(H.labels, h)},
        "residual": residual,
        "pass": residual <= args.tol,
    }
    if exact is not None:
        result["exact"] = {label: str(w) for label, w in zip(H.labels, exact)}
    if H.haar is not None:
        result["supplied_deviation"] = float(np.max(np.abs(H.haar - h)))
        result["pass"] = result["pass"] and result["supplied_deviation"] <= args.tol
    _emit(out, result)
    return EXIT_OK if result["pass"] else EXIT_FAIL


def cmd_make(args, out) -> int:
    family, params = args.family, args.params

    def one_int():
        if len(params) != 1:
            raise UsageError(f"{family} takes one integer parameter")
        return int(params[0])

    if family == "cyclic":
        H = cons.cyclic(one_int())
    elif family == "hamming":
        H = cons.hamming(one_int())
    elif family == "s3":
        H = cons.s3()
    elif family == "s3-classes":
        H = cons.s3_classes()
    else:
        if len(params) != 1:
            raise UsageError(f"{family} takes a Cayley table file")
        labels, table = parse_cayley(read_json(params[0]))
        if family == "group":
            H = cons.from_cayley_table(table, labels)
        else:
            H = cons.conjugacy_class_hypergroup(table)
    text = dumps(serialize(H))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_cosets(args, out) -> int:
    pair = _pair(args)
    residual = commutativity_residual(pair)
    result = {
        "K": [pair.G.labels[k] for k in pair.K],
        "blocks": pair.block_labels(),
        "representatives": [pair.G.labels[r] for r in pair.partition.representatives],
        "gelfand_pair": residual <= 1e-12,
        "commutativity_residual": residual,
        "quotient": serialize(pair.quotient, include_haar=True),
    }
    if args.format == "csv":
        _csv(out, ["block", "representative", "members"],
             [[i, r, " ".join(b)] for i, (r, b) in enumerate(zip(result["representatives"], result["blocks"]))])
    else:
        _emit(out, result)
    return EXIT_OK


def cmd_dual(args, out) -> int:
    pair = _pair(args)
    dual = compute_dual(pair, tol=args.tol)
    reps = [pair.G.labels[r] for r in pair.partition.representatives]
    if args.format == "csv":
        header = ["index", "plancherel"] + [f"{r}.{part}" for r in reps for part in ("re", "im")]
        rows = [[i, repr(float(w))] + [repr(v) for z in phi.values for v in complex_pair(z)]
                for i, (phi, w) in enumerate(zip(dual.characters, dual.plancherel))]
        _csv(out, header, rows)
    else:
        _emit(out, {
            "blocks": pair.block_labels(),
            "representatives": reps,
            "characters": [[complex_pair(z) for z in phi.values] for phi in dual.characters],
            "plancherel": [float(w) for w in dual.plancherel],
        })
    return EXIT_OK


def cmd_fourier(args, out) -> int:
    pair = _pair(args)
    dual = compute_dual(pair)
    f = parse_function(read_json(args.f), pair.G.labels)
    coeffs = fourier(pair, dual, f, project=args.project, tol=args.tol)
    if args.format == "csv":
        _csv(out, ["index", "re", "im"], [[i, *map(repr, complex_pair(z))] for i, z in enumerate(coeffs)])
    else:
        _emit(out, {"coefficients": [complex_pair(z) for z in coeffs]})
    return EXIT_OK


def cmd_ifourier(args, out) -> int:
    pair = _pair(args)
    dual = compute_dual(pair)
    f = inverse_fourier(pair, dual, parse_coefficients(read_json(args.f)))
    if args.format == "csv":
        _csv(out, ["label", "re", "im"], [[lab, *map(repr, complex_pair(z))] for lab, z in zip(pair.G.labels, f)])
    else:
        _emit(out, {label: complex_pair(z) for label, z in zip(pair.G.labels, f)})
    return EXIT_OK


def cmd_plancherel(args, out) -> int:
    pair = _pair(args)
    dual = compute_dual(pair)
    if args.f:
        F = [parse_function(read_json(args.f), pair.G.labels)]
    else:
        F = random_biinvariant(pair, np.random.default_rng(args.seed), args.trials)
    if args.project:
        F = [pair.projector @ f for f in F]
    rows = []
    for i, f in enumerate(F):
        r = plancherel_residual(pair, dual, f, tol=args.tol)
        rows.append({"trial": i, "residual": r, "pass": r <= PLANCHEREL_TOL})
    ok = all(row["pass"] for row in rows)
    if args.format == "csv":
        _csv(out, ["trial", "residual", "pass"], [[r["trial"], repr(r["residual"]), r["pass"]] for r in rows])
    else:
        for row in rows:
            _emit(out, row)
        _emit(out, {"summary": {"trials": len(rows), "failures": sum(not r["pass"] for r in rows),
                                "plancherel": [float(w) for w in dual.plancherel], "pass": ok}})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sobolev(args, out) -> int:
    pair = _pair(args)
    dual = compute_dual(pair)
    params = SobolevParams(args.s, _gamma(args, pair, dual))
    f = parse_function(read_json(args.f), pair.G.labels)
    if args.project:
        f = pair.projector @ f
    norm = sobolev_norm(pair, dual, f, params, tol=args.tol)
    _emit(out, {"s": params.s, "gamma": params.gamma.tolist(), "norm": norm})
    return EXIT_OK


def cmd_embed_report(args, out) -> int:
    pair = _pair(args)
    dual = compute_dual(pair)
    params = SobolevParams(args.s, _gamma(args, pair, dual))
    F = random_biinvariant(pair, np.random.default_rng(args.seed), args.trials)
    rows = embedding_sweep(pair, dual, F, params, sigma=args.sigma, slack=args.slack)
    checks = list(rows[0]) if rows else []
    ok = all(rep.passed for row in rows for rep in row.values())
    if args.format == "csv":
        header = ["trial"] + [f"{c}.{k}" for c in checks for k in ("lhs", "rhs", "margin", "pass")]
        _csv(out, header, [
            [i] + [v for c in checks for v in (repr(row[c].lhs), repr(row[c].rhs), repr(row[c].margin), row[c].passed)]
            for i, row in enumerate(rows)
        ])
    else:
        for i, row in enumerate(rows):
            _emit(out, {"trial": i, "pass": all(r.passed for r in row.values()),
                        **{c: rep.to_dict() for c, rep in row.items()}})
        _emit(out, {"summary": {
            "trials": len(rows), "s": params.s, "sigma": args.sigma, "gamma": params.gamma.tolist(),
            "violations": {c: sum(not row[c].passed for row in rows) for c in checks}, "pass": ok,
        }})
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "validate": cmd_validate,
    "haar": cmd_haar,
    "make": cmd_make,
    "cosets": cmd_cosets,
    "dual": cmd_dual,
    "fourier": cmd_fourier,
    "ifourier": cmd_ifourier,
    "plancherel": cmd_plancherel,
    "sobolev": cmd_sobolev,
    "sobolev-norm": cmd_sobolev,
    "embed-report": cmd_embed_report,
}


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"hypersobolev: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AxiomError as exc:
        print(json.dumps({"error": str(exc), **exc.report.to_dict()}), file=sys.stderr)
        return EXIT_FAIL
    except STRUCTURAL_ERRORS as exc:
        print(f"hypersobolev: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL
    except HypergroupError as exc:
        print(f"hypersobolev: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
