import json

import pytest

from src.algebra.prelie import AlgebraKind
from src.algebra.scalars import rational_array
from src.corpus.document import (
    Document,
    document_from_algebra,
    load_document,
    parse_document,
    save_document,
    serialize_document,
)
from src.errors import DocumentError, InputError


def payload(**overrides):
    base = {
        "kind": "prelie",
        "dim": 2,
        "product": [[[0, 0], [0, 0]], [[-1, 0], [0, 1]]],
        "operators": {"N": [[1, 1], [0, 1]]},
    }
    base.update(overrides)
    return base


def parse(**overrides):
    return parse_document(json.dumps(payload(**overrides)))


class TestRoundTrip:
    def test_every_fixture(self, repository):
        for name in repository.names():
            document = repository.get(name)
            text = serialize_document(document)
            again = parse_document(text)
            assert again.to_dict() == document.to_dict()
            assert serialize_document(again) == text

    def test_scalars_are_canonical(self):
        document = parse(operators={"N": [["2/4", "-3"], [" 6 / 3 ", 0]]})
        written = json.loads(serialize_document(document))
        assert written["operators"]["N"] == [["1/2", "-3"], ["2", "0"]]

    def test_save_and_load(self, tmp_path, a2_doc):
        path = tmp_path / "a2.json"
        save_document(a2_doc, path)
        assert load_document(path).to_dict() == a2_doc.to_dict()

    def test_document_from_algebra(self, a2, a2_doc):
        document = document_from_algebra(a2, "deformed", {"N": a2_doc.operator("N")})
        assert document.algebra == a2 and document.tag == "deformed"
        assert document.kind is AlgebraKind.PRE_LIE


class TestValidation:
    def test_a2_contents(self):
        document = parse()
        assert document.dim == 2 and document.basis == ()
        assert list(document.algebra.constants[1, 1]) == [0, 1]

    def test_floats_are_refused(self):
        with pytest.raises(DocumentError, match=r"\$\.operators\.N\[0\]\[1\]"):
            parse(operators={"N": [[1, 0.5], [0, 1]]})

    def test_unknown_kind(self):
        with pytest.raises(DocumentError, match="kind"):
            parse(kind="jordan")

    def test_unchecked_kind_is_not_a_document_kind(self):
        with pytest.raises(DocumentError):
            parse(kind="unchecked")

    @pytest.mark.parametrize("dim", [0, -1, "2", True, None])
    def test_bad_dimension(self, dim):
        with pytest.raises(DocumentError, match="dim"):
            parse(dim=dim)

    def test_product_shape(self):
        with pytest.raises(DocumentError, match=r"\$\.product\[1\]"):
            parse(product=[[[0, 0], [0, 0]], [[-1, 0]]])

    def test_missing_product(self):
        data = payload()
        del data["product"]
        with pytest.raises(DocumentError, match="missing"):
            parse_document(json.dumps(data))

    def test_wrong_basis_length(self):
        with pytest.raises(DocumentError, match="basis"):
            parse(basis=["x"])

    def test_asymmetric_tensor(self):
        with pytest.raises(DocumentError, match="symmetric"):
            parse(tensors={"r": [[0, 1], [0, 0]]})

    def test_form_symmetry_is_checked(self):
        with pytest.raises(DocumentError, match=r"\$\.forms\.B"):
            parse(forms={"B": {"matrix": [[0, 1], [1, 0]], "symmetry": "skew"}})

    def test_zero_denominator(self):
        with pytest.raises(DocumentError):
            parse(vectors={"a": ["1/0", 0]})

    def test_is_an_input_error(self):
        with pytest.raises(InputError):
            parse(kind="jordan")

    def test_syntax_error_reports_the_line(self):
        with pytest.raises(DocumentError, match="line 2"):
            parse_document('{\n  "kind": prelie\n}')

    def test_top_level_must_be_an_object(self):
        with pytest.raises(DocumentError):
            Document.from_dict([1, 2])


class TestLookups:
    def test_unknown_operator_lists_known_names(self, a2_doc):
        with pytest.raises(DocumentError, match="N_bad"):
            a2_doc.operator("M")

    def test_builtin_representations(self, a2_doc):
        assert a2_doc.representation("regular").dim_v == 2
        assert a2_doc.representation("dual").dim_v == 2
        with pytest.raises(DocumentError, match="regular"):
            a2_doc.representation("adjoint")

    def test_stored_representation(self):
        rho = [[[0]], [[0]]]
        document = parse(representations={"line": {"dimV": 1, "rho": rho, "mu": rho}})
        assert document.representation("line").dim_v == 1

    def test_with_operator(self, a2_doc):
        updated = a2_doc.with_operator("M", rational_array([[0, 0], [0, 1]]))
        assert "M" in updated.operators and "M" not in a2_doc.operators


def test_missing_file(tmp_path):
    with pytest.raises(DocumentError, match="missing.json"):
        load_document(tmp_path / "missing.json")
