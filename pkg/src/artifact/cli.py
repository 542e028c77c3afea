"""Batch front end: one JSON job in, one JSON (or DOT) report out.

A job looks like::

    {"command": "invariants", "n": 2, "field": 32003, "precision": 6, "seed": 0,
     "module": {"standard": "ideal_point", "k": 2}}

Exit codes: 0 success, 2 parse error, 3 precision error, 4 precondition
violation, 5 internal defect.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

import numpy as np

from . import deform, descriptors as desc, homology, normal_forms as nfm
from .errors import DefectError, PrecisionError, PreconditionError
from .field import Field
from .filtrations import (char_function, check_inclusion, filtration, generalized_rank,
                          generic_bound_holds, module_invariants, naive_min_generators,
                          quasi_free_type, slope_rank)
from .modules import (Cokernel, Expr, Free, Image, Kernel, LocalModule, Morph,
                      PresentationMatrix, _poly_rows, extension_expr, ideal_expr,
                      presentation_expr, realize, standard_expr, sum_expr)
from .normal_forms import ExtMatrix, TorsionFreeNF
from .serialize import field_from_spec, module_from_json, module_to_json, presentation_from_json

EXIT_OK, EXIT_PARSE, EXIT_PRECISION, EXIT_PRECONDITION, EXIT_DEFECT = 0, 2, 3, 4, 5


class JobError(Exception):
    """The job document is malformed."""


def _need(d: dict, key: str):
    if key not in d:
        raise JobError(f"missing field {key!r}")
    return d[key]


# module expressions


def build_expr(doc: Any, n: int) -> Expr:
    if not isinstance(doc, dict) or len(doc) == 0:
        raise JobError(f"module expression must be a non-empty object, got {doc!r}")
    if "standard" in doc:
        params = {k: v for k, v in doc.items() if k != "standard"}
        return standard_expr(doc["standard"], params, n)
    if "free" in doc:
        return Free(n, int(doc["free"]))
    if "ideal" in doc:
        return ideal_expr(n, doc["ideal"])
    if "presentation" in doc:
        pres = doc["presentation"]
        if "matrix" in pres:
            P = PresentationMatrix.from_rows(int(_need(pres, "rows")), pres["matrix"])
        else:
            P = presentation_from_json(pres)
        return presentation_expr(n, P)
    if "sum" in doc:
        parts = [build_expr(e, n) for e in doc["sum"]]
        if not parts:
            raise JobError("empty direct sum")
        return sum_expr(*parts)
    for key, cls in (("kernel", Kernel), ("image", Image), ("cokernel", Cokernel)):
        if key in doc:
            m = doc[key]
            f = Morph(build_expr(_need(m, "source"), n), build_expr(_need(m, "target"), n),
                      _poly_rows(_need(m, "matrix")))
            return cls(f)
    if "extension" in doc:
        if n != 2:
            raise PreconditionError("extension modules live over C_2")
        return extension_expr(doc["extension"])
    if "nf" in doc:
        if n != 2:
            raise PreconditionError("normal forms live over C_2")
        return nfm.nf_expr(TorsionFreeNF.from_json(doc["nf"]))
    raise JobError(f"unknown module expression {sorted(doc)}")


def build_module(doc: Any, n: int, p: int, F: Field) -> LocalModule:
    if isinstance(doc, dict) and "matrices" in doc:
        M = module_from_json(doc["matrices"])
        if (M.n, M.p, M.field) != (n, p, F):
            raise PreconditionError("stored module does not match the job's (n, p, field)")
        return M
    return realize(build_expr(doc, n), p, F)


def _default_precision(job: dict, n: int) -> int:
    doc = job.get("module")
    if doc is None:
        return 6
    if isinstance(doc, dict) and "matrices" in doc:
        return int(doc["matrices"]["p"])
    return max(6, build_expr(doc, n).min_precision() + 2)


# commands


class Context:
    def __init__(self, job: dict):
        self.job = job
        self.params: dict = job.get("params", {}) or {}
        self.n = int(job.get("n", 2))
        self.field = field_from_spec(job.get("field"))
        self.seed = int(job.get("seed", 0))
        self.p: int | None = job.get("precision")
        self.emit = job.get("emit", "json")

    def precision(self) -> int:
        if self.p is None:
            self.p = _default_precision(self.job, self.n)
        return int(self.p)

    def module(self) -> LocalModule:
        return build_module(_need(self.job, "module"), self.n, self.precision(), self.field)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def module_report(M: LocalModule) -> dict:
    first, second = filtration(M, "first"), filtration(M, "second")
    F1, F2 = char_function(M, "first"), char_function(M, "second")
    qf = quasi_free_type(M)
    return {
        "dim": M.dim,
        "R": generalized_rank(M),
        "slope_rank": slope_rank(M),
        "x_module": module_invariants(M).to_json(),
        "index": sum(g.torsion_length for g in first.graded),
        "first_filtration": first.to_json(),
        "second_filtration": second.to_json(),
        "char_first": F1.to_json(),
        "char_second": F2.to_json(),
        "convex_first": F1.is_convex(),
        "concave_second": F2.is_concave(),
        "generic_bound": generic_bound_holds(M),
        "inclusion": check_inclusion(M),
        "naive_min_generators": naive_min_generators(M),
        "quasi_free_type": None if qf is None else qf.to_json(),
        "expression": M.describe(),
    }


def cmd_invariants(ctx: Context) -> dict:
    return module_report(ctx.module())


def cmd_module(ctx: Context) -> dict:
    return {"module": module_to_json(ctx.module())}


def cmd_classify(ctx: Context) -> dict:
    if ctx.n != 2:
        raise PreconditionError("classification is for n = 2")
    P = ctx.params
    if "module" in ctx.job:
        M = ctx.module()
        nf = nfm.classify_torsion_free(M)
        return {"nf": nf.to_json(), "R": nf.R, "index": nf.index,
                "invariants": nfm.nf_invariants(nf).to_json()}
    N = tuple(int(v) for v in _need(P, "N"))
    T = _need(P, "T")
    T = [T["k"]] if isinstance(T, dict) else list(T)
    res = nfm.classify_kernel(N, T, P.get("map"), ctx.precision(), ctx.field, ctx.seed)
    return {**res.to_json(), "R": res.nf.R, "index": res.nf.index,
            "invariants": nfm.nf_invariants(res.nf).to_json()}


def cmd_reflexivity(ctx: Context) -> dict:
    M = ctx.module()
    return {"reflexive": nfm.reflexivity_check(M), "dim": M.dim}


def cmd_poset(ctx: Context):
    P = ctx.params
    poset = deform.type_poset(int(_need(P, "R")), int(P.get("n", ctx.n)))
    if ctx.emit == "dot":
        return poset.to_dot()
    return poset.to_json()


def cmd_deform(ctx: Context) -> dict:
    P = ctx.params
    a, b = _need(P, "from"), _need(P, "to")
    n = len(a)
    out: dict = {"from": list(a), "to": list(b), "n": n,
                 "char_order": deform.char_order(a, b).value}
    verdict = deform.deforms_to(a, b)
    out["deforms_to"] = verdict.value
    if n == 2:
        if b[1] == a[1] + 1 and sum(a) + a[1] == sum(b) + b[1]:
            out["witness"] = deform.witness_family(a, b, ctx.precision(), ctx.field).to_json()
    else:
        out["provenance"] = deform.CONJECTURAL
    return out


def _resolution(P: dict, n: int) -> homology.Resolution:
    r = _need(P, "resolution")
    return homology.resolution_of(_need(r, "target"), int(r.get("length", 4)),
                                  int(r.get("n", n)), int(r.get("i", 1)))


def cmd_resolution(ctx: Context) -> dict:
    res = _resolution(ctx.params, ctx.n)
    p = ctx.precision()
    return {"resolution": res.to_json(),
            "compositions_vanish": homology.compositions_vanish(res),
            "stage_homology": homology.stage_homology(res, p, ctx.field),
            "expected": homology.expected_stage_homology(res),
            "exact": homology.is_exact(res, p, ctx.field)}


def cmd_ext(ctx: Context) -> dict:
    res = _resolution(ctx.params, ctx.n)
    if res.n != ctx.n:
        raise PreconditionError("resolution and coefficient module have different n")
    N = ctx.module()
    k = int(ctx.params.get("max_degree", 2))
    return {"resolution": res.target, "params": dict(res.params),
            "dims": homology.ext_dims(res, N, k),
            "raw_dims": homology.ext_dims(res, N, k, stabilized=False),
            "profile": [c.to_json() for c in homology.ext_profile(res, N, k)]}


def cmd_smith(ctx: Context) -> dict:
    P = ctx.params
    A = ExtMatrix.from_polys(_need(P, "matrix"), int(_need(P, "precision")), ctx.field)
    sm = nfm.dvr_smith(A)
    out = sm.to_json()
    if "classify" in P:
        r, s = A.shape
        out["nf"] = nfm.classify_extension(r, s, A).to_json()
    return out


def cmd_obstruction(ctx: Context) -> dict:
    P = ctx.params
    A = ExtMatrix.from_polys(_need(P, "matrix"), int(_need(P, "precision")), ctx.field)
    return {"square_zero": homology.obstruction_square(A)}


def _jsonify(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def cmd_descriptors(ctx: Context) -> dict:
    P = ctx.params
    op = _need(P, "op")
    if op == "rr":
        D = desc.SheafDescriptor.from_json(_need(P, "descriptor"))
        out = desc.rr_invariants(D, P.get("delta")).to_json()
    elif op == "locally_free":
        D = desc.locally_free_descriptor(*(int(_need(P, k)) for k in ("n", "r", "d", "g", "degL")))
        out = {"descriptor": D.to_json(), **desc.rr_invariants(D, P.get("delta")).to_json()}
    elif op == "ideal_points":
        D = desc.ideal_points_descriptor(*(int(_need(P, k)) for k in ("n", "g", "degL", "p0")))
        out = {"descriptor": D.to_json(),
               "torsion": list(desc.ideal_points_torsion(D.n, int(P["p0"]))),
               **desc.rr_invariants(D, P.get("delta")).to_json()}
    elif op == "semistability":
        sub = desc.SheafDescriptor.from_json(_need(P, "sub"))
        whole = desc.SheafDescriptor.from_json(_need(P, "whole"))
        out = {"semistable": desc.semistability(sub, whole, bool(P.get("strict", False)))}
    elif op == "qlf2":
        degL = int(_need(P, "degL"))
        a = desc.qlf2_relations(_need(P, "E"), _need(P, "F"), degL)
        out = a.to_json()
        if "tensor_with" in P:
            t = P["tensor_with"]
            b = desc.qlf2_relations(_need(t, "E"), _need(t, "F"), degL)
            out["tensor"] = desc.qlf2_tensor(a, b, degL).to_json()
    elif op == "rank2":
        out = desc.rank2_relations(*(int(_need(P, k)) for k in ("d", "degL", "i"))).to_json()
    elif op == "threshold":
        out = desc.deformation_threshold(*(int(_need(P, k)) for k in ("d", "degL", "p"))).to_json()
    elif op == "rank3":
        datum = desc.Rank3Datum(*(int(_need(P, k)) for k in ("eps", "gamma", "l", "g")))
        out = desc.rank3_analysis(datum, bool(P.get("F_stable", False)),
                                  bool(P.get("G_stable", False))).to_json()
    elif op == "ideal_ext":
        keys = ("n", "Csq", "KSC", "p0", "h0_a", "h0_b", "h0_K")
        out = desc.ideal_ext_dims(*(int(_need(P, k)) for k in keys)).to_json()
    else:
        raise JobError(f"unknown descriptor op {op!r}")
    return {"op": op, **{k: _jsonify(v) for k, v in out.items()}}


COMMANDS: dict[str, Callable[[Context], Any]] = {
    "invariants": cmd_invariants,
    "module": cmd_module,
    "classify": cmd_classify,
    "reflexivity": cmd_reflexivity,
    "poset": cmd_poset,
    "deform": cmd_deform,
    "resolution": cmd_resolution,
    "ext": cmd_ext,
    "smith": cmd_smith,
    "obstruction": cmd_obstruction,
    "descriptors": cmd_descriptors,
}

_NEEDS_PRECISION = {"invariants", "module", "classify", "reflexivity", "resolution", "ext", "deform"}


def run(job: dict) -> str:
    """Execute a job and return the report text (JSON or DOT)."""
    if not isinstance(job, dict):
        raise JobError("job must be a JSON object")
    command = _need(job, "command")
    if command not in COMMANDS:
        raise JobError(f"unknown command {command!r}; choose from {sorted(COMMANDS)}")
    ctx = Context(job)
    if ctx.emit not in ("json", "dot"):
        raise JobError(f"unknown emit format {ctx.emit!r}")
    if ctx.emit == "dot" and command != "poset":
        raise JobError("DOT output is only available for the poset command")
    if command in _NEEDS_PRECISION:
        ctx.precision()
    result = COMMANDS[command](ctx)
    header = {"q": ctx.field.q, "p": ctx.p, "seed": ctx.seed}
    if isinstance(result, str):
        p = "-" if ctx.p is None else ctx.p
        return f"// q={header['q']} p={p} seed={header['seed']}\n" + result
    doc = {"command": command, "provenance": header, "result": result}
    return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    ap.add_argument("job", nargs="?", default="-", help="job JSON file, or - for stdin")
    ap.add_argument("--field", help="prime modulus or Q")
    ap.add_argument("--precision", type=int, help="x-precision p")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--emit", choices=("json", "dot"))
    ap.add_argument("--list", action="store_true", help="list commands and exit")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.list:
        print("\n".join(sorted(COMMANDS)))
        return EXIT_OK
    try:
        text = sys.stdin.read() if args.job == "-" else open(args.job, encoding="utf-8").read()
        job = json.loads(text)
        if not isinstance(job, dict):
            raise JobError("job must be a JSON object")
        if args.field is not None:
            job["field"] = args.field
        if args.precision is not None:
            job["precision"] = args.precision
        if args.seed is not None:
            job["seed"] = args.seed
        if args.emit is not None:
            job["emit"] = args.emit
        out = run(job)
    except (OSError, json.JSONDecodeError, JobError, KeyError, TypeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DefectError as exc:
        print(f"internal defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
