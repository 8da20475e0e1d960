import random

import pytest
from hypothesis import given, settings, strategies as st

from echlab.io import INPUT_FORMAT, InputDocument, ParseError, dumps_input, loads_input, read_input
from echlab.samples import random_hfdata

from conftest import CORPUS_NAMES, corpus_path

MINIMAL = """{
  "format": "echlab-hf/1",
  "p": "0",
  "generators": [
    {"name": "x", "grading": "0"},
    {"name": "y", "grading": "1"}
  ],
  "differential": [
    {"from": "x", "to": "y", "t_power": "1", "coefficient": "1"}
  ]
}
"""


def test_minimal_document():
    doc = loads_input(MINIMAL)
    assert doc.p == 0 and doc.generators == [("x", 0), ("y", 1)]
    assert doc.differential == [("x", "y", 1, 1)]
    assert doc.version == INPUT_FORMAT


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_files_are_canonical(name):
    text = corpus_path(name).read_text(encoding="utf-8")
    assert dumps_input(loads_input(text)) == text


def test_random_documents_round_trip_bit_identically():
    rng = random.Random(0)
    for _ in range(100):
        doc = InputDocument.from_hfdata(random_hfdata(rng))
        text = dumps_input(doc)
        again = loads_input(text)
        assert again == doc
        assert dumps_input(again) == text


@settings(max_examples=50, deadline=None)
@given(st.integers(-(10**60), 10**60), st.integers(0, 10**30), st.text(min_size=1, max_size=8))
def test_big_integers_and_names_survive(c, k, name):
    doc = InputDocument(0, [(name, 3), (name + "'", 2 - 2 * k)], [(name, name + "'", k, c)], [], {"note": "ünïcode"})
    assert loads_input(dumps_input(doc)) == doc


def _error(text):
    with pytest.raises(ParseError) as info:
        loads_input(text)
    return info.value


def test_json_syntax_error_has_position():
    err = _error(MINIMAL.replace('"p": "0",', '"p": "0"'))
    assert err.line == 4


def test_unknown_generator_is_a_parse_error_with_position():
    err = _error(MINIMAL.replace('"to": "y"', '"to": "z"'))
    assert "unknown generator 'z'" in str(err)
    assert err.line == 9 and err.column > 1


def test_negative_t_power_names_the_edge():
    err = _error(MINIMAL.replace('"t_power": "1"', '"t_power": "-1"'))
    assert "'x' -> 'y'" in str(err) and "negative t_power" in str(err)
    assert err.line == 9


def test_other_schema_errors():
    assert "duplicate" in str(_error(MINIMAL.replace('"name": "y"', '"name": "x"')))
    assert "unsupported format" in str(_error(MINIMAL.replace("echlab-hf/1", "other/9")))
    assert "integer" in str(_error(MINIMAL.replace('"grading": "1"', '"grading": "one"')))
    assert "missing field" in str(_error('{"format": "echlab-hf/1"}'))


def test_read_corpus_files():
    for name in CORPUS_NAMES:
        hf = read_input(corpus_path(name)).to_hfdata()
        assert "genus" in hf.metadata
