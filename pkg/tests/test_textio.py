import pytest
from hypothesis import given, settings

from conftest import A_GLUE, S0_TEXT
from test_automaton import automata
from retractable import format_automaton, format_spec, parse_automaton, parse_spec
from retractable.harness import construction_corpus
from retractable.textio import ParseError, load_automaton, save_automaton, load_spec, save_spec

GLUE_TEXT = """\
# comment line
states a b k
inputs x y
trans a x b   # trailing comment
trans b x a
trans k x k
trans a y k
trans b y k
trans k y k
"""


def test_parse_glue():
    assert parse_automaton(GLUE_TEXT) == A_GLUE


@pytest.mark.parametrize("text, line, fragment", [
    ("states a\ninputs x\ntrans a x a\ntrans a x a\n", 4, "duplicate transition"),
    ("states a b\ninputs x\ntrans a x b\n", 3, "missing transition for (b, x)"),
    ("states a\ninputs x\ntrans a x z\n", 3, "unknown state"),
    ("states a\ninputs x\ntrans a q a\n", 3, "unknown input"),
    ("states a\ninputs x\nfoo\n", 3, "unknown directive"),
    ("trans a x a\n", 1, "before"),
    ("states a a\n", 1, "duplicate state"),
    ("inputs x\n", 1, "missing 'states'"),
    ("states a\ninputs x\ntrans a x\n", 3, "takes"),
])
def test_automaton_errors(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_automaton(text, "f.aut")
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"f.aut:{line}:")
    assert info.value.code == "parse"


@settings(max_examples=80, deadline=None)
@given(automata(max_states=5, max_inputs=3))
def test_automaton_round_trip(A):
    assert parse_automaton(format_automaton(A)) == A


def test_spec_round_trip(s0):
    again = parse_spec(format_spec(s0))
    assert format_spec(again) == format_spec(s0)
    assert again.phis == s0.phis


def test_corpus_round_trip():
    for spec in construction_corpus(count=20, seed=11):
        text = format_spec(spec)
        again = parse_spec(text)
        assert format_spec(again) == text
        assert dict(again.components) == dict(spec.components)


@pytest.mark.parametrize("mutate, fragment", [
    (lambda t: t.replace("end\nbegin component 1", "begin component 1", 1), "unknown directive"),
    (lambda t: t[: t.rindex("end")], "not closed"),
    (lambda t: t.replace("least 0\n", ""), "missing 'least'"),
    (lambda t: t.replace("cover 1 0", "cover 1"), "'cover' takes"),
    (lambda t: t + "phi 1 0 a k\n", "duplicate phi"),
    (lambda t: t.replace("states k\n", "states k\ninputs x z\n"), "differ from the shared"),
])
def test_spec_errors(mutate, fragment):
    with pytest.raises(ParseError) as info:
        parse_spec(mutate(S0_TEXT))
    assert fragment in str(info.value)


def test_component_inputs_line_allowed():
    text = S0_TEXT.replace("states k\n", "states k\ninputs y x\n")
    assert parse_spec(text).components["0"].states == ("k",)


def test_files(tmp_path, s0):
    save_automaton(A_GLUE, tmp_path / "g.aut")
    assert load_automaton(tmp_path / "g.aut") == A_GLUE
    save_spec(s0, tmp_path / "s.spec")
    assert format_spec(load_spec(tmp_path / "s.spec")) == format_spec(s0)
