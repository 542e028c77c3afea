"""JSON documents for modules and presentations.

Matrices are row-major lists. Over GF(q) entries are residues; over the
rationals they are integers or ``"a/b"`` strings.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import PreconditionError
from .field import Field
from .modules import LocalModule, Opaque, PresentationMatrix, _opaque_counter


def field_from_spec(spec) -> Field:
    """``32003``, ``"Q"``/``"rationals"``, ``{"q": 7}`` or ``{"kind": "rationals"}``."""
    if spec is None:
        return Field()
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, bool):
        raise PreconditionError(f"bad field spec {spec!r}")
    if isinstance(spec, int):
        return Field(spec)
    if isinstance(spec, str):
        s = spec.strip().lower()
        if s in ("q", "qq", "rationals", "rational"):
            return Field.rationals()
        if s.startswith("gf(") and s.endswith(")"):
            s = s[3:-1]
        try:
            return Field(int(s))
        except ValueError:
            raise PreconditionError(f"bad field spec {spec!r}") from None
    if isinstance(spec, dict):
        if spec.get("kind") == "rationals" or ("q" in spec and spec["q"] is None):
            return Field.rationals()
        if "q" in spec:
            return Field(int(spec["q"]))
    raise PreconditionError(f"bad field spec {spec!r}")


def _entry(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def module_to_json(M: LocalModule) -> dict:
    F = M.field
    return {"n": M.n, "p": M.p, "q": F.q, "dim": M.dim,
            "X": F.to_jsonable(M.X), "Z": F.to_jsonable(M.Z)}


def module_from_json(doc: dict) -> LocalModule:
    """A field-level module; it cannot be rebuilt at other precisions."""
    try:
        n, p, d = int(doc["n"]), int(doc["p"]), int(doc["dim"])
        F = Field(doc["q"]) if doc.get("q") is not None else Field.rationals()
        X = F.array([[_entry(v) for v in row] for row in doc["X"]]).reshape(d, d)
        Z = F.array([[_entry(v) for v in row] for row in doc["Z"]]).reshape(d, d)
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed module document: {exc}") from None
    return LocalModule(n, p, F, X, Z, Opaque(n, p, next(_opaque_counter), {"op": "loaded"}))


def presentation_to_json(P: PresentationMatrix) -> dict:
    return {"rows": P.rows, "relations": [[str(e) for e in col] for col in P.relations]}


def presentation_from_json(doc: dict) -> PresentationMatrix:
    return PresentationMatrix.from_columns(int(doc["rows"]), doc["relations"])


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
