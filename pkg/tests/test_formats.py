import pytest
from hypothesis import given

from omegazoo.formats import (FormatError, dump, dumps_hoa, dumps_json, load_automaton, loads_hoa,
                              loads_json)
from omegazoo.iso import isomorphic
from omegazoo.zoo import ENTRIES, zoo
from omegazoo.automaton import Automaton

from conftest import automata

OMEGA_KEYS = [k for k in ENTRIES if isinstance(zoo(k), Automaton)]


@given(automata(max_states=6, letters=3))
def test_json_round_trip_is_exact(a):
    assert loads_json(dumps_json(a)) == a


@given(automata(max_states=6, letters=3))
def test_hoa_round_trip_is_exact(a):
    assert loads_hoa(dumps_hoa(a)) == a


@pytest.mark.parametrize("key", OMEGA_KEYS)
@pytest.mark.parametrize("fmt", ["hoa", "json"])
def test_zoo_dump_round_trip_preserves_isomorphism(key, fmt, tmp_path):
    a = zoo(key)
    path = tmp_path / f"{key}.{fmt}"
    path.write_text(dump(a, fmt, key))
    b = load_automaton(path)
    same, mapping = isomorphic(a, b)
    assert same and mapping[a.initial] == b.initial


@pytest.mark.parametrize("key", ["classifier", "theju"])
def test_finite_zoo_entries_round_trip_through_json(key):
    x = zoo(key)
    assert dumps_json(loads_json(dumps_json(x, key)), key) == dumps_json(x, key)


@pytest.mark.parametrize("text, message", [
    ("HOA: v1\nStates: 1\n", "--BODY--"),
    ("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 2 Inf(0)&Inf(1)\n--BODY--\n--END--\n", "acceptance"),
    ("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0] 3\n--END--\n",
     "out of range"),
    ("HOA: v1\nStates: 1\nStart: 0\nAP: 2 \"a\" \"b\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0&1] 0\n--END--\n",
     "exactly one letter"),
    ("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[0] 0\n--END--\n",
     "state-based"),
])
def test_hoa_parser_rejects_unsupported_input(text, message):
    with pytest.raises(FormatError, match=message):
        loads_hoa(text)


def test_json_parser_diagnostics():
    with pytest.raises(FormatError, match="invalid JSON"):
        loads_json("{")
    with pytest.raises(FormatError, match="missing field"):
        loads_json('{"alphabet": ["a"]}')
    with pytest.raises(FormatError, match="unknown acceptance"):
        loads_json('{"alphabet": ["a"], "states": ["p"], "initial": "p", "acceptance": "rabin", "transitions": []}')


def test_hoa_output_uses_transition_based_marks():
    text = dumps_hoa(zoo("abkks"))
    assert "Acceptance: 1 Inf(0)" in text and "{0}" in text
    assert "Acceptance: 1 Fin(0)" in dumps_hoa(zoo("cmain"))
