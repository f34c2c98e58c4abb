"""Command-line front end: build models, run computations, emit JSON/DOT."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import blueprint
from . import verify as verify_module
from .catalog import CatalogError, GroupModel, from_selector
from .semirings import BUILTIN_SEMIRINGS, MissingAuxiliaryValue, PointMatrix, is_point
from .spectrum import (
    GeneratorCapExceeded,
    export_dot,
    poset,
    spectrum_to_json,
)
from .weyl import LawDoesNotDescend, RankSpaceUndecidable

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blueweyl",
        description="exact spectra, rank spaces, Weyl monoids and semiring "
                    "points of F1 group models")
    parser.add_argument("--cap", type=int, default=26,
                        help="generator cap for prime enumeration (default 26)")
    parser.add_argument("--budget", type=int, default=10_000,
                        help="saturation step budget (default 10000)")
    parser.add_argument("--seed", type=int, default=20259,
                        help="sampling seed for the pattern oracle")
    parser.add_argument("--samples", type=int, default=2000,
                        help="samples per field and locus for the oracle")
    parser.add_argument("--json-pretty", action="store_true",
                        help="indent JSON output")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("spec", help="prime spectrum of a model")
    p.add_argument("model")
    p = sub.add_parser("rank-space", help="rank space of a model")
    p.add_argument("model")
    p = sub.add_parser("weyl", help="Weyl monoid of a model")
    p.add_argument("model")
    p = sub.add_parser("tits-points", help="F1^m-rational points of the rank space")
    p.add_argument("model")
    p.add_argument("--m", type=int, default=1, choices=(1, 2))
    p = sub.add_parser("points", help="check a semiring-valued matrix point")
    p.add_argument("--model", required=True)
    p.add_argument("--semiring", required=True, choices=sorted(BUILTIN_SEMIRINGS))
    p.add_argument("--check", required=True,
                   help="row-major JSON list of matrix entries")
    p.add_argument("--aux", default=None,
                   help="JSON object with values of auxiliary generators (e.g. d)")
    p = sub.add_parser("oracle", help="compare sampled zero patterns with a spectrum")
    p.add_argument("model", choices=("psl2-conj", "psl2-adj"))
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=("paper-counts", "properties", "oracle"))
    p = sub.add_parser("dot", help="DOT rendering of the spectrum poset")
    p.add_argument("model")
    return parser


def _emit(payload: dict, args, out) -> None:
    indent = 2 if args.json_pretty else None
    out.write(json.dumps(payload, indent=indent, sort_keys=True) + "\n")


def _model(args) -> GroupModel:
    return from_selector(args.model)


def run(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return EXIT_USAGE if stop.code else EXIT_OK
    blueprint.DEFAULT_ENTAILMENT_BUDGET = args.budget
    try:
        return _dispatch(args, out)
    except (CatalogError, GeneratorCapExceeded, RankSpaceUndecidable,
            LawDoesNotDescend, MissingAuxiliaryValue, ValueError) as err:
        _emit({"error": type(err).__name__, "message": str(err)}, args, out)
        return EXIT_COMPUTATION


def _dispatch(args, out) -> int:
    if args.verb == "spec":
        model = _model(args)
        P = poset(model.spectrum(cap=args.cap))
        if len(P.points) <= 2000:
            payload = spectrum_to_json(P)
        else:  # the Hasse scan is quadratic; emit the raw point list instead
            payload = {"points": [sorted(p.vars) for p in P.points]}
        payload["model"] = model.name
        payload["count"] = len(P.points)
        payload["labels"] = [p.label(model.presentation) for p in P.points]
        _emit(payload, args, out)
        return EXIT_OK

    if args.verb == "rank-space":
        model = _model(args)
        pts = model.rank_points(cap=args.cap)
        payload = {
            "model": model.name,
            "rank": pts[0].rank if pts else 0,
            "points": [p.to_json() for p in pts],
        }
        try:
            payload["weyl_table"] = [list(r)
                                     for r in model.weyl_monoid(cap=args.cap).table]
        except LawDoesNotDescend:
            payload["weyl_table"] = None
        _emit(payload, args, out)
        return EXIT_OK

    if args.verb == "weyl":
        model = _model(args)
        W = model.weyl_monoid(cap=args.cap)
        payload = W.to_json()
        payload["model"] = model.name
        payload["group"] = W.is_group()
        payload["abelian"] = W.is_abelian()
        _emit(payload, args, out)
        return EXIT_OK

    if args.verb == "tits-points":
        model = _model(args)
        result = model.tits_points(args.m, cap=args.cap)
        payload = {
            "model": model.name,
            "m": args.m,
            "count": result.count,
            "per_point": list(result.per_point),
        }
        if result.monoid is not None:
            payload["monoid_order"] = len(result.monoid)
        _emit(payload, args, out)
        return EXIT_OK

    if args.verb == "points":
        model = from_selector(args.model)
        S = BUILTIN_SEMIRINGS[args.semiring]
        entries = json.loads(args.check)
        if args.semiring == "tropical":
            entries = [float("inf") if e in ("inf", None) else e for e in entries]
        M = PointMatrix(model.dimension, tuple(entries))
        aux = json.loads(args.aux) if args.aux else None
        ok = is_point(model, M, S, aux)
        _emit({"model": model.name, "semiring": S.name, "is_point": ok},
              args, out)
        return EXIT_OK

    if args.verb == "oracle":
        report = verify_module.oracle_comparison(args.model, seed=args.seed,
                                                 samples=args.samples)
        _emit(report, args, out)
        return EXIT_OK if report["ok"] else EXIT_COMPUTATION

    if args.verb == "verify":
        checks = verify_module.run_suite(args.suite, seed=args.seed,
                                         samples=args.samples, cap=args.cap)
        failed = [c for c in checks if not c["pass"]]
        for c in checks:
            status = "PASS" if c["pass"] else "FAIL"
            out.write(f"{status} {c['name']}: expected={c['expected']} "
                      f"actual={c['actual']}\n")
        _emit({"suite": args.suite, "checks": len(checks),
               "failed": len(failed)}, args, out)
        return EXIT_OK if not failed else EXIT_COMPUTATION

    if args.verb == "dot":
        model = _model(args)
        P = poset(model.spectrum(cap=args.cap))
        out.write(export_dot(P, model.presentation, name=model.name))
        return EXIT_OK

    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
