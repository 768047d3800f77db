import pytest
from hypothesis import given, strategies as st

from omegazoo.automaton import (Alphabet, AutomatonError, Lasso, Transition, build, is_complete,
                                is_deterministic, nondeterministic_pairs, trim, validate)
from omegazoo.zoo import ENTRIES, check_expected, zoo

from conftest import lassos


def test_tokenize_prefers_longest_letter():
    ab = Alphabet(("a", "r1", "1", "r"))
    assert ab.render(ab.tokenize("r1a 1,r")) == "r1 a 1 r"


def test_tokenize_rejects_unknown_letter():
    with pytest.raises(AutomatonError):
        Alphabet(("a",)).tokenize("ab")


def test_alphabet_rejects_duplicates():
    with pytest.raises(AutomatonError):
        Alphabet(("a", "a"))


def test_lasso_parse_and_render():
    ab = Alphabet(("x", "a", "b"))
    w = Lasso.parse("x:xaxa", ab)
    assert w.prefix == (0,) and w.period == (0, 1, 0, 1)
    assert w.render(ab) == "x:x a x a"
    with pytest.raises(AutomatonError):
        Lasso.parse("xa", ab)
    with pytest.raises(AutomatonError):
        Lasso((), ())


@given(lassos(letters=3, max_prefix=5, max_period=6))
def test_canonical_lasso_denotes_the_same_word(w):
    c = w.canonical()
    assert len(c.period) <= len(w.period) and len(c.prefix) <= len(w.prefix)
    assert all(c.letter_at(i) == w.letter_at(i) for i in range(60))
    assert c.canonical() == c


def test_build_rejects_duplicate_states():
    with pytest.raises(AutomatonError):
        build("d", ("a",), ("p", "p"), "p", [])


def test_validate_reports_duplicates_and_unreachable():
    a = build("v", ("a",), ("p", "q"), "p", [("p", "a", "p", False), ("p", "a", "p", False)], dedupe=False)
    rep = validate(a)
    assert not rep.ok
    assert any("duplicate" in v for v in rep.violations)


def test_determinism_and_completeness():
    a = zoo("fig2_nonhd")
    assert not is_deterministic(a)
    assert nondeterministic_pairs(a) == [(a.state("s0"), a.alphabet.index("a"))]
    assert is_complete(a)
    assert not is_complete(build("i", ("a", "b"), ("p",), "p", [("p", "a", "p", True)]))
    assert is_deterministic(zoo("dstrong"))


def test_amain_drawn_nondeterminism_is_exactly_one_pair():
    a = zoo("amain_drawn")
    assert nondeterministic_pairs(a) == [(a.state("I"), a.alphabet.index("a"))]


def test_amain_has_the_escape_transition_as_extra_nondeterminism():
    a = zoo("amain")
    pairs = {(a.state_names[q], a.alphabet.letters[x]) for q, x in nondeterministic_pairs(a)}
    assert pairs == {("I", "a"), ("I_c", "a")}


def test_trim_drops_unreachable_states():
    a = build("t", ("a",), ("p", "q", "r"), "p", [("p", "a", "q", True), ("r", "a", "p", False)])
    b = trim(a)
    assert b.state_names == ("p", "q")


@pytest.mark.parametrize("key", sorted(ENTRIES))
def test_zoo_entries_match_recorded_invariants(key):
    assert check_expected(key) == []


def test_transition_describe():
    a = zoo("abkks")
    t = Transition(a.state("i_a"), a.alphabet.index("a"), a.state("p_a"), True)
    assert a.describe(t) == "i_a =>a p_a"
