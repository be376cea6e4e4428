"""JSON presentation files and exact (de)serialisation helpers.

Schema::

    {
      "k": 2,
      "A": [[1], [-1]],            # optional if B is given
      "B": [[1], [1]],             # optional if A is given
      "triple": [[["1/1"]]],       # optional rho x rho x rho, numbers or "p/q"
      "hodge": {"h3X": 4, "h3Y": 2, "h2X": 1, "h2Y": 2},
      "gw": [{"class": [1, 0], "n": "5/1", "lift": [0, 0]}],
      "order": 4
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import ConifoldError
from .linalg import IntMatrix
from .series import TruncatedSeries, parse_scalar
from .transition import Hodge, TransitionPresentation, presentation

__all__ = [
    "ParseError",
    "PresentationFile",
    "parse_presentation",
    "load_presentation",
    "fraction_str",
    "parse_fraction",
    "dumps",
    "encode_scalar",
]


class ParseError(ConifoldError):
    """Malformed input document."""


@dataclass(frozen=True)
class PresentationFile:
    presentation: TransitionPresentation
    gw: tuple | None = None
    order: int = 4
    extra: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.presentation.k


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {x!r}") from exc
    raise ParseError(f"expected an integer or a \"p/q\" string, got {x!r}")


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def _matrix(data, k: int, name: str) -> IntMatrix:
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise ParseError(f"{name} must be a list of rows")
    if len(data) != k:
        raise ParseError(f"{name} has {len(data)} rows, expected k = {k}")
    widths = {len(r) for r in data}
    if len(widths) > 1:
        raise ParseError(f"{name} has ragged rows")
    cols = widths.pop() if widths else 0
    rows = [[_int(x, f"{name} entry") for x in r] for r in data]
    return IntMatrix.from_rows(rows, cols=cols)


def _triple(data, rho: int | None) -> dict:
    if not isinstance(data, list):
        raise ParseError("triple must be a nested list")
    n = len(data)
    if rho is not None and n != rho:
        raise ParseError(f"triple must be {rho} x {rho} x {rho}")
    out = {}
    for a, plane in enumerate(data):
        if not isinstance(plane, list) or len(plane) != n:
            raise ParseError("triple must be cubical")
        for b, line in enumerate(plane):
            if not isinstance(line, list) or len(line) != n:
                raise ParseError("triple must be cubical")
            for c, x in enumerate(line):
                v = parse_fraction(x)
                if v:
                    out[(a, b, c)] = v
    return out


def parse_presentation(doc: Any) -> PresentationFile:
    """Build a presentation from a decoded JSON object (or a JSON string)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if "k" not in doc:
        raise ParseError("missing field k")
    k = _int(doc["k"], "k")
    if k < 0:
        raise ParseError("k must be nonnegative")
    A = _matrix(doc["A"], k, "A") if doc.get("A") is not None else None
    B = _matrix(doc["B"], k, "B") if doc.get("B") is not None else None
    if A is None and B is None:
        raise ParseError("need at least one of A, B")
    # rank deficiency surfaces as a ConifoldError (validation failure), not a parse error
    P = presentation(k, A=A, B=B)
    triple = _triple(doc["triple"], P.rho) if doc.get("triple") is not None else None
    hodge = None
    if doc.get("hodge") is not None:
        h = doc["hodge"]
        if not isinstance(h, dict):
            raise ParseError("hodge must be an object")
        try:
            hodge = Hodge(*(_int(h[key], key) for key in ("h3X", "h3Y", "h2X", "h2Y")))
        except KeyError as exc:
            raise ParseError(f"hodge is missing {exc.args[0]}") from exc
    P = TransitionPresentation(P.k, P.A, P.B, triple, hodge)
    gw = None
    if doc.get("gw") is not None:
        if not isinstance(doc["gw"], list):
            raise ParseError("gw must be a list")
        entries = []
        for e in doc["gw"]:
            if not isinstance(e, dict) or "class" not in e or "n" not in e:
                raise ParseError("gw entries need class and n")
            cls = tuple(_int(x, "class entry") for x in e["class"])
            lift = tuple(_int(x, "lift entry") for x in e["lift"]) if e.get("lift") is not None else None
            entries.append((cls, parse_fraction(e["n"]), lift))
        gw = tuple(entries)
    order = _int(doc.get("order", 4), "order")
    if order < 0:
        raise ParseError("order must be nonnegative")
    return PresentationFile(P, gw, order)


def load_presentation(path: str) -> PresentationFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_presentation(text)


def to_document(pf: PresentationFile) -> dict:
    """Inverse of :func:`parse_presentation`."""
    P = pf.presentation
    doc: dict = {"k": P.k, "A": P.A.to_rows(), "B": P.B.to_rows(), "order": pf.order}
    if P.triple is not None:
        r = P.rho
        doc["triple"] = [[[fraction_str(P.triple.get((a, b, c), 0)) for c in range(r)]
                          for b in range(r)] for a in range(r)]
    if P.hodge is not None:
        h = P.hodge
        doc["hodge"] = {"h3X": h.h3X, "h3Y": h.h3Y, "h2X": h.h2X, "h2Y": h.h2Y}
    if pf.gw is not None:
        doc["gw"] = [gw_entry(c, n, lift) for c, n, lift in pf.gw]
    return doc


def gw_entry(cls, n, lift=None) -> dict:
    e = {"class": list(cls), "n": fraction_str(n)}
    if lift is not None:
        e["lift"] = list(lift)
    return e


def encode_scalar(x) -> str:
    """Scalars in ``Q[lam, zinv]`` use the ``"p/q · lam · z^-1"`` text form."""
    if isinstance(x, TruncatedSeries):
        return str(x)
    return fraction_str(x)


def decode_scalar(text: str) -> TruncatedSeries:
    return parse_scalar(text)


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
