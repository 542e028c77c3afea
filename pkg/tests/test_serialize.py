import numpy as np
import pytest

from artifact.errors import PreconditionError
from artifact.field import Field
from artifact.modules import PresentationMatrix, module_from_presentation, standard_module
from artifact.serialize import (field_from_spec, module_from_json, module_to_json,
                                presentation_from_json, presentation_to_json)


@pytest.mark.parametrize("spec, q", [(None, 32003), (7, 7), ("101", 101), ("GF(13)", 13),
                                     ({"q": 5}, 5)])
def test_prime_field_specs(spec, q):
    assert field_from_spec(spec).q == q


@pytest.mark.parametrize("spec", ["Q", "rationals", {"kind": "rationals"}, {"q": None}])
def test_rational_field_specs(spec):
    assert field_from_spec(spec).q is None


@pytest.mark.parametrize("spec", [True, "banana", [7], 4.5, {"p": 3}, 4])
def test_bad_field_specs(spec):
    with pytest.raises(PreconditionError):
        field_from_spec(spec)


@pytest.mark.parametrize("field", [Field(), Field(7), Field.rationals()])
def test_module_round_trip(field):
    M = standard_module("ideal_point", {"k": 2}, 2, 4, field)
    doc = module_to_json(M)
    back = module_from_json(doc)
    assert (back.n, back.p, back.dim, back.field) == (M.n, M.p, M.dim, M.field)
    assert module_to_json(back) == doc
    assert not back.rebuildable()


def test_rational_entries_are_strings():
    F = Field.rationals()
    M = standard_module("structure", {"i": 1}, 2, 3, F)
    doc = module_to_json(M)
    doc["X"] = [[str(v) if v else 0 for v in row] for row in doc["X"]]
    back = module_from_json(doc)
    assert np.array_equal(back.X, M.X) and np.array_equal(back.Z, M.Z)
    assert module_to_json(back) == module_to_json(M)


def test_malformed_module_document():
    with pytest.raises(PreconditionError):
        module_from_json({"n": 2, "p": 3})
    with pytest.raises(PreconditionError):
        module_from_json({"n": 2, "p": 3, "q": 7, "dim": 2, "X": [[0]], "Z": [[0]]})


def test_presentation_round_trip():
    P = PresentationMatrix.from_rows(2, [["x", "z", "0"], ["0", "x^2", "z"]])
    doc = presentation_to_json(P)
    assert doc["rows"] == 2 and len(doc["relations"]) == 3
    Q = presentation_from_json(doc)
    assert Q == P
    assert module_from_presentation(2, 5, Q).dim == module_from_presentation(2, 5, P).dim


def test_presentation_shape_errors():
    with pytest.raises(PreconditionError):
        PresentationMatrix.from_rows(2, [["x"]])
    with pytest.raises(PreconditionError):
        presentation_from_json({"rows": 2, "relations": [["x"]]})
