"""Command line front end: ``conifold validate | report | transform``.

Structured output goes to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 validation or computation failure, 2 unreadable input or
bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import amodel, bmodel, gluing
from .errors import ConifoldError
from .fileformat import (ParseError, PresentationFile, dumps, encode_scalar, fraction_str,
                         gw_entry, load_presentation, to_document)
from .series import parse_scalar
from .transition import validate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _err(msg: str) -> None:
    print(f"conifold: {msg}", file=sys.stderr)


# -- validate --------------------------------------------------------------------


def validation_document(pf: PresentationFile) -> dict:
    report = validate(pf.presentation)
    return {
        "passed": report.passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail,
                    "violations": [list(v) if isinstance(v, tuple) else v for v in c.violations]}
                   for c in report.checks],
    }


def _validation_text(doc: dict) -> str:
    lines = []
    for c in doc["checks"]:
        tag = "PASS" if c["passed"] else "FAIL"
        line = f"{tag} {c['name']}: {c['detail']}"
        if not c["passed"] and c["violations"]:
            line += f" [violations: {c['violations']}]"
        lines.append(line)
    lines.append("valid" if doc["passed"] else "invalid")
    return "\n".join(lines) + "\n"


def cmd_validate(args) -> int:
    pf = load_presentation(args.path)
    doc = validation_document(pf)
    _emit(doc, args.format, _validation_text)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


# -- report --------------------------------------------------------------------


def _scalar_matrix(M) -> list[list[str]]:
    return [[encode_scalar(x) for x in row] for row in M]


def _log_terms(series) -> list[dict]:
    out = []
    for (alpha, log_form, inv_form, power), c in series.sorted_terms():
        term = {"coeff": encode_scalar(c), "r_exponent": list(alpha)}
        if log_form is not None:
            term["log_form"] = list(log_form)
        if inv_form is not None:
            term["inverse_form"] = list(inv_form)
            term["power"] = power
        out.append(term)
    return out


def _triples(n: int):
    for l in range(1, n + 1):
        for m in range(l, n + 1):
            for p in range(m, n + 1):
                yield l, m, p


def report_document(pf: PresentationFile, monodromy=False, yukawa=False, glue=False,
                    series_order: int | None = None) -> dict:
    P = pf.presentation
    order = pf.order if series_order is None else series_order
    model = amodel.ExtremalModel(P, order=order)
    doc: dict = {
        "presentation": {"k": P.k, "mu": P.mu, "rho": P.rho,
                         "A": P.A.to_rows(), "B": P.B.to_rows()},
        "series_order": order,
        "structural_coefficients": [
            {"index": [l, m, n], "value": encode_scalar(amodel.structural_coefficient(model, l, m, n))}
            for l, m, n in _triples(P.rho)],
    }
    if monodromy:
        pl = []
        for l in range(1, P.mu + 1):
            direct = bmodel.monodromy_pairing(P, l)
            pl.append({"coordinate": l, "pairing": direct,
                       "picard_lefschetz_agrees": direct == bmodel.monodromy_pairing_via_pl(P, l)})
        doc["monodromy"] = {
            "dubrovin_residues": [{"node": i, "matrix": _scalar_matrix(amodel.dubrovin_residue(model, i))}
                                  for i in range(1, P.k + 1)],
            "blocks": [{"divisor": l, "matrix": _scalar_matrix(amodel.monodromy_block(model, l))}
                       for l in range(1, P.rho + 1)],
            "pairings": pl,
        }
    if yukawa:
        doc["yukawa"] = [{"index": [p, m, n], "terms": _log_terms(bmodel.yukawa_principal(P, p, m, n))}
                         for p, m, n in _triples(P.mu)]
    if glue:
        g = gluing.glue_check(P)
        doc["glue"] = {
            "verdicts": [{"name": v.name, "result": "pass" if v.passed else "fail",
                          "substitution": v.substitution,
                          "mismatches": [list(x) for x in v.mismatches]} for v in g.verdicts],
            "AtB_zero": g.orthogonal,
            "det_S_nonzero": g.invertible,
        }
    return doc


def _report_text(doc: dict) -> str:
    P = doc["presentation"]
    lines = [f"k = {P['k']}, mu = {P['mu']}, rho = {P['rho']}, series order {doc['series_order']}",
             "structural coefficients:"]
    for e in doc["structural_coefficients"]:
        lines.append(f"  C{tuple(e['index'])} = {e['value']}")
    if "monodromy" in doc:
        lines.append("Dubrovin residues:")
        for e in doc["monodromy"]["dubrovin_residues"]:
            lines.append(f"  node {e['node']}: {e['matrix']}")
        lines.append("monodromy blocks:")
        for e in doc["monodromy"]["blocks"]:
            lines.append(f"  N{e['divisor']} = {e['matrix']}")
        lines.append("Picard-Lefschetz pairings:")
        for e in doc["monodromy"]["pairings"]:
            lines.append(f"  l = {e['coordinate']}: {e['pairing']}")
    if "yukawa" in doc:
        lines.append("Yukawa principal parts:")
        for e in doc["yukawa"]:
            parts = [f"({t['coeff']})/({t['inverse_form']})^{t['power']}" for t in e["terms"]]
            lines.append(f"  u{tuple(e['index'])} = {' + '.join(parts) or '0'}")
    if "glue" in doc:
        lines.append("glue verdicts:")
        for v in doc["glue"]["verdicts"]:
            lines.append(f"  {v['name']}: {v['result']}")
            for mm in v["mismatches"]:
                lines.append(f"    mismatch {mm}")
        lines.append(f"  A^t B = 0: {doc['glue']['AtB_zero']}; det[A|B] != 0: {doc['glue']['det_S_nonzero']}")
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    pf = load_presentation(args.path)
    report = validate(pf.presentation)
    if not report.passed:
        for c in report.failed():
            _err(f"validation failed: {c.name}: {c.detail}")
        return EXIT_FAIL
    if args.series_order is not None and args.series_order < 0:
        _err("series order must be nonnegative")
        return EXIT_USAGE
    doc = report_document(pf, args.monodromy, args.yukawa, args.glue, args.series_order)
    _emit(doc, args.format, _report_text)
    return EXIT_OK


_SCALAR_KEYS = {"value", "coeff"}


def reencode(obj, key=None):
    """Parse every scalar string back into ``Q[lam, zinv]`` and print it again."""
    if isinstance(obj, dict):
        return {k: reencode(v, k) for k, v in obj.items()}
    if isinstance(obj, list):
        return [reencode(v, key) for v in obj]
    if isinstance(obj, str) and key in _SCALAR_KEYS | {"matrix"}:
        return encode_scalar(parse_scalar(obj))
    if isinstance(obj, str) and key == "n":
        return fraction_str(Fraction(obj))
    return obj


# -- transform -------------------------------------------------------------------


def transform_document(pf: PresentationFile, direction: str) -> dict:
    if pf.gw is None:
        raise ConifoldError("transform needs gw data")
    P = pf.presentation
    model = amodel.ExtremalModel(P, order=pf.order)
    if direction == "x-to-y":
        lifts = {c: lift for c, _, lift in pf.gw if lift is not None}
        base = len(pf.gw[0][0]) if pf.gw else 0
        result = amodel.transform_prepotential(model, [(c, n) for c, n, _ in pf.gw],
                                               lifts=lifts, base_count=base)
        entries = [gw_entry(c, n) for c, n in result.coefficients.items()]
        side = "Y"
    elif direction == "y-to-x":
        width = len(pf.gw[0][0]) if pf.gw else P.rho
        base = width - P.rho
        if base < 0:
            raise ConifoldError(f"Y classes must have at least rho = {P.rho} entries")
        out = amodel.restrict_prepotential(model, [(c, n) for c, n, _ in pf.gw], base)
        entries = [gw_entry(c, n) for c, n in out.items()]
        side = "X"
    else:  # pragma: no cover - argparse restricts the choices
        raise ValueError(direction)
    doc = to_document(pf)
    doc["gw"] = entries
    doc["side"] = side
    return doc


def _transform_text(doc: dict) -> str:
    lines = [f"{doc['side']} coefficients:"]
    for e in doc["gw"]:
        lines.append(f"  q^{tuple(e['class'])}: {e['n']}")
    return "\n".join(lines) + "\n"


def cmd_transform(args) -> int:
    pf = load_presentation(args.path)
    report = validate(pf.presentation)
    if not report.passed:
        for c in report.failed():
            _err(f"validation failed: {c.name}: {c.detail}")
        return EXIT_FAIL
    if pf.gw is None:
        _err("transform needs a gw list in the input file")
        return EXIT_USAGE
    doc = transform_document(pf, args.direction)
    _emit(doc, args.format, _transform_text)
    return EXIT_OK


# -- plumbing --------------------------------------------------------------------


def _emit(doc: dict, fmt: str, text_renderer) -> None:
    if fmt == "text":
        sys.stdout.write(text_renderer(doc))
    else:
        sys.stdout.write(dumps(doc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conifold",
                                     description="Exact computations for conifold transitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("path", help="presentation file (JSON)")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("validate", help="check the relation matrices")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="residues, monodromy, Yukawa couplings, glue verdicts")
    common(p)
    p.add_argument("--monodromy", action="store_true")
    p.add_argument("--yukawa", action="store_true")
    p.add_argument("--glue", action="store_true")
    p.add_argument("--series-order", type=int, default=None, metavar="N")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("transform", help="move Gromov-Witten data across the transition")
    common(p)
    p.add_argument("--direction", choices=("x-to-y", "y-to-x"), default="x-to-y")
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except ConifoldError as exc:
        _err(str(exc))
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
