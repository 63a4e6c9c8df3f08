import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restrict_lr.cli import corpus_dir
from restrict_lr.document import DocumentError, load, parse, serialize
from restrict_lr.lrin import check_lrr_axioms

CORPUS = sorted(p.name for p in corpus_dir().glob("*.json") if p.name != "manifest.json")


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_round_trip(name):
    doc = load(corpus_dir() / name)
    text = serialize(doc)
    assert parse(text) == doc
    assert serialize(parse(text)) == text


def test_witt_document_passes_axioms():
    X = load(corpus_dir() / "witt_p2.json").lie_rinehart()
    assert check_lrr_axioms(X, samples=20).passed


def test_empty_lie_block_is_zero_algebra():
    X = parse('{"p": 2, "lie": {"basis": []}}').lie_rinehart()
    assert X.dim == 0
    assert check_lrr_axioms(X, samples=5).passed


def test_dimension_mismatch_names_key():
    text = json.dumps(
        {"p": 2, "algebra": {"basis": ["1", "x"], "products": {"x*x": ["0", "0", "1"]}}}, indent=2
    )
    with pytest.raises(DocumentError) as exc:
        parse(text)
    (err,) = exc.value.errors
    assert err.key == "algebra.products.x*x"
    assert "dimension mismatch" in err.message
    assert err.line == next(i for i, ln in enumerate(text.splitlines(), 1) if '"x*x"' in ln)


def test_syntax_error_position():
    with pytest.raises(DocumentError) as exc:
        parse('{\n  "p": 2,\n  "lie": [\n}')
    (err,) = exc.value.errors
    assert (err.line, err.column) == (4, 1)


def test_undeclared_name():
    with pytest.raises(DocumentError) as exc:
        parse('{"p": 2, "lie": {"basis": ["d"], "brackets": {"d,e": "d"}}}')
    assert any("undeclared" in e.message and e.key == "lie.brackets.d,e" for e in exc.value.errors)


def test_unknown_key_and_bad_prime():
    with pytest.raises(DocumentError):
        parse('{"p": 2, "bogus": 1}')
    with pytest.raises(DocumentError):
        parse('{"p": 4}')


def test_bad_coefficient_column():
    with pytest.raises(DocumentError) as exc:
        parse('{"p": 2, "lie": {"basis": ["d"], "pmap": {"d": "d +* d"}}}')
    assert exc.value.errors[0].column is not None


def test_expression_and_list_forms_agree():
    a = parse('{"p": 3, "lie": {"basis": ["u", "v"], "brackets": {"u,v": "2*u + v"}, "pmap": {"u": "0", "v": "v"}}}')
    b = parse('{"p": 3, "lie": {"basis": ["u", "v"], "brackets": {"v,u": ["1", "2"]}, "pmap": {"u": ["0", "0"], "v": ["0", "1"]}}}')
    assert a == b


def test_rational_function_coefficients():
    doc = parse('{"p": 2, "field": "Fp_t", "algebra": {"basis": ["1", "s"], "products": {"s*s": ["(t^2+t)/t", "0"]}}}')
    assert doc.algebra.products["s*s"] == ["t+1", "0"]


NAMES = ["a", "b", "c"]


@st.composite
def abelian_docs(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(0, 3))
    names = NAMES[:n]
    coeff = st.one_of(st.integers(-7, 7), st.integers(0, 9).map(str))
    pmap = {u: draw(st.lists(coeff, min_size=n, max_size=n)) for u in names if draw(st.booleans())}
    doc = {"p": p, "lie": {"basis": names, "pmap": pmap}}
    if n and draw(st.booleans()):
        doc["module"] = {"basis": ["m"], "P": [[str(draw(st.integers(0, p - 1)))]]}
    return json.dumps(doc)


@given(abelian_docs())
def test_canonical_form_is_stable(text):
    d = parse(text)
    s = serialize(d)
    assert parse(s) == d
    assert serialize(parse(s)) == s
