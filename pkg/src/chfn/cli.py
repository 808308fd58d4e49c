"""``chfn`` command-line interface.

Every subcommand reads JSON (a file path or ``-`` for stdin) and writes one
JSON document to stdout. Exit codes: 0 success, 2 validation or usage
error, 3 numerical failure.
"""
import argparse
import os
import sys

import numpy as np

from . import serialization as ser
from .errors import ChfnError, NumericalError, ValidationError
from .hermitian import DEFAULT_TOL

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3
SEED_ENV = "CHFN_SEED"


def _read(path):
    if path == "-":
        return ser.loads(sys.stdin.read())
    try:
        with open(path) as fh:
            return ser.loads(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _matrix_arg(path):
    doc = _read(path)
    if isinstance(doc, dict):
        doc = doc.get("matrix", doc)
    return ser.matrix_from_json(doc)


def _pair_arg(path):
    doc = _read(path)
    try:
        return ser.matrix_from_json(doc["A"]), ser.matrix_from_json(doc["B"])
    except (KeyError, TypeError) as exc:
        raise ValidationError('pair file must be {"A": matrix, "B": matrix}') from exc


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ValidationError(f"{SEED_ENV} must be an integer") from exc


# -- commands ---------------------------------------------------------------

def cmd_classify(args):
    from .hermitian import certify_group_element
    from .isometry import Kind, classify_isometry, decompose_loxodromic

    A = certify_group_element(_matrix_arg(args.matrix), args.tol).matrix
    c = classify_isometry(A, args.tol)
    out = ser.classification_to_json(c)
    if c.kind is Kind.LOXODROMIC:
        out.update(ser.decomposition_to_json(
            decompose_loxodromic(A, args.tol, allow_degenerate=True)))
    return out


def cmd_invariants(args):
    from .invariants import pair_invariants

    A, B = _pair_arg(args.pair)
    P = pair_invariants(A, B, args.tol, args.alpha_index, args.beta_index)
    return ser.pair_invariants_to_json(P)


def cmd_reconstruct(args):
    from .reconstruction import canonical_pair_from_invariants

    P = ser.pair_invariants_from_json(_read(args.input))
    cp = canonical_pair_from_invariants(P, args.tol, refine=not args.no_refine)
    return {"A": ser.matrix_to_json(cp.A), "B": ser.matrix_to_json(cp.B),
            "method": cp.method,
            "residuals": {k: float(v) for k, v in cp.residuals.items()}}


def cmd_check(args):
    from .invariants import triple_from_values
    from .nonsingular import nonsingularity_report, reducibility_witness

    out = {}
    if args.pair:
        A, B = _pair_arg(args.pair)
        out["nonsingularity"] = ser.report_to_json(nonsingularity_report(A, B, args.tol))
        w = reducibility_witness(A, B)
        out["reducibility"] = None if w is None else {
            "case": w.case, "vector": ser.vector_to_json(w.vector)}
    if args.invariants:
        P = ser.pair_invariants_from_json(_read(args.invariants))
        T = triple_from_values(P.X1, P.X2, P.X3, args.tol)
        out["variety"] = {"residual": float(T.variety_residual),
                          "inequality_slack": float(T.inequality_slack),
                          "equality": bool(T.equality),
                          "corollary_margin": float(T.corollary_margin)}
    if not out:
        raise ValidationError("check needs --pair and/or --invariants")
    return out


def cmd_glue(args):
    from .gluing import attach_pants, close_handle, make_pants

    doc = _read(args.input)
    kappa, psi = ser.twist_from_json(doc.get("twist", {"kappa": [0, 0], "psi": 0}))
    try:
        if args.mode == "pants":
            P1 = make_pants(ser.matrix_from_json(doc["P1"]["A"]),
                            ser.matrix_from_json(doc["P1"]["B"]), args.tol)
            P2 = make_pants(ser.matrix_from_json(doc["P2"]["A"]),
                            ser.matrix_from_json(doc["P2"]["B"]), args.tol)
            G = attach_pants(P1, P2, (kappa, psi))
            return {"kind": "(0,4)",
                    "generators": [ser.matrix_to_json(M) for M in G.generators],
                    "peripherals": [ser.matrix_to_json(M) for M in G.peripherals],
                    "twist": ser.twist_to_json(kappa, psi),
                    "parameters": G.parameter_count}
        A, B = ser.matrix_from_json(doc["A"]), ser.matrix_from_json(doc["B"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed glue input: {exc}") from exc
    G = close_handle(A, B, (kappa, psi), args.tol)
    return {"kind": "(1,1)",
            "generators": [ser.matrix_to_json(G.A), ser.matrix_to_json(G.B)],
            "commutator": ser.matrix_to_json(G.commutator),
            "twist": ser.twist_to_json(kappa, psi)}


def cmd_assemble(args):
    from .gluing import assemble_surface, budget_lines

    genus, pants, twists = ser.surface_input_from_json(_read(args.input))
    if args.genus is not None and args.genus != genus:
        raise ValidationError(f"--genus {args.genus} disagrees with input genus {genus}")
    rep = assemble_surface(genus, pants, twists, args.tol)
    return {"genus": rep.genus,
            "generators": [ser.matrix_to_json(M) for M in rep.generators],
            "relation_residual": rep.relation_residual,
            "central_element": ser.complex_to_json(rep.central_element),
            "budget": rep.budget_total,
            "budget_items": budget_lines(genus)}


def cmd_sample(args):
    from .sampling import Sampler, SamplerConfig, random_surface

    cfg = SamplerConfig(seed=args.seed)
    if args.kind == "surface":
        S = random_surface(cfg, args.genus)
        return ser.surface_input_to_json(S.genus, S.records, S.twists)
    s = Sampler(cfg)
    if args.kind == "null":
        return {"vectors": [ser.vector_to_json(s.null_vector()) for _ in range(args.count)]}
    if args.kind == "pair":
        pairs = [s.nonsingular_pair() for _ in range(args.count)]
        return {"pairs": [{"A": ser.matrix_to_json(p.A), "B": ser.matrix_to_json(p.B),
                           "rejections": p.rejections} for p in pairs]}
    make = s.group_element if args.kind == "element" else s.loxodromic
    return ser.corpus_to_json([make() for _ in range(args.count)])


def cmd_verify(args):
    from .suites import run_suite

    return run_suite(args.suite, args.samples, args.seed)


# -- parser -----------------------------------------------------------------

def build_parser():
    from .suites import SUITES

    p = argparse.ArgumentParser(
        prog="chfn", description="Invariants, reconstruction and gluing for loxodromic pairs in SU(3,1).")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help=f"certification tolerance (default {DEFAULT_TOL})")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a group element")
    c.add_argument("--matrix", required=True)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("invariants", help="pair invariants of two loxodromics")
    c.add_argument("--pair", required=True)
    c.add_argument("--alpha-index", type=int, choices=(1, 2))
    c.add_argument("--beta-index", type=int, choices=(1, 2))
    c.set_defaults(func=cmd_invariants)

    c = sub.add_parser("reconstruct", help="canonical pair from invariants")
    c.add_argument("--input", required=True)
    c.add_argument("--no-refine", action="store_true")
    c.set_defaults(func=cmd_reconstruct)

    c = sub.add_parser("check", help="variety, non-singularity and reducibility reports")
    c.add_argument("--pair")
    c.add_argument("--invariants")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("glue", help="(0,4) or (1,1) assembly")
    c.add_argument("--mode", choices=("pants", "handle"), required=True)
    c.add_argument("--input", required=True)
    c.set_defaults(func=cmd_glue)

    c = sub.add_parser("assemble", help="closed surface representation")
    c.add_argument("--input", required=True)
    c.add_argument("--genus", type=int)
    c.set_defaults(func=cmd_assemble)

    seed = _default_seed()
    c = sub.add_parser("sample", help="seeded random corpus")
    c.add_argument("--kind", choices=("null", "element", "loxodromic", "pair", "surface"),
                   default="element")
    c.add_argument("--count", type=int, default=1)
    c.add_argument("--genus", type=int, default=2)
    c.add_argument("--seed", type=int, default=seed)
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("verify", help="run a property suite")
    c.add_argument("--suite", choices=sorted(SUITES), required=True)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int, default=seed)
    c.set_defaults(func=cmd_verify)
    return p


def run(argv=None, stdout=None):
    """Run the CLI and return the exit code."""
    stdout = stdout or sys.stdout
    try:
        parser = build_parser()
    except ValidationError as exc:
        print(f"chfn: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        out = args.func(args)
    except ValidationError as exc:
        print(f"chfn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, ChfnError, np.linalg.LinAlgError) as exc:
        print(f"chfn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    stdout.write(ser.dumps(out) + "\n")
    return EXIT_OK


def main():
    sys.exit(run())
