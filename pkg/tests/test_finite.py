import itertools

from hypothesis import given, strategies as st

from omegazoo.automaton import Alphabet
from omegazoo.finite import (FiniteAutomaton, classify, complement_dfa, determinize, dfa_equivalent,
                             dfa_included, live_state_count, make_finite, minimize_dfa,
                             prefix_closure_dfa, restrict_alphabet)
from omegazoo.separation import theju_prefix_dfa
from omegazoo.zoo import zoo

from oracles import myhill_nerode_size


@st.composite
def dfas(draw, max_states=6, letters=2):
    n = draw(st.integers(1, max_states))
    edges = [(q, x, draw(st.integers(0, n - 1))) for q in range(n) for x in range(letters)]
    acc = draw(st.sets(st.integers(0, n - 1)))
    return make_finite(("a", "b", "c")[:letters], n, 0, edges, acc)


@st.composite
def nfas(draw, max_states=5, letters=2):
    n = draw(st.integers(1, max_states))
    edges = [(q, x, d) for q in range(n) for x in range(letters)
             for d in draw(st.sets(st.integers(0, n - 1), max_size=2))]
    acc = draw(st.sets(st.integers(0, n - 1)))
    return make_finite(("a", "b")[:letters], n, 0, edges, acc)


def words(letters, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(range(letters), repeat=k)


@given(dfas())
def test_hopcroft_matches_myhill_nerode(d):
    m = minimize_dfa(d)
    assert m.state_count == myhill_nerode_size(d)
    assert all(m.accepts(w) == d.accepts(w) for w in words(2, 6))


@given(dfas(letters=3, max_states=5))
def test_hopcroft_matches_myhill_nerode_three_letters(d):
    assert minimize_dfa(d).state_count == myhill_nerode_size(d)


@given(nfas())
def test_determinize_preserves_language(n):
    d = determinize(n)
    assert d.deterministic and d.complete
    assert all(d.accepts(w) == n.accepts(w) for w in words(2, 6))


@given(dfas(), dfas())
def test_inclusion_and_equivalence_witnesses(d1, d2):
    inc, w = dfa_included(d1, d2)
    if inc:
        assert all(not d1.accepts(x) or d2.accepts(x) for x in words(2, 6))
    else:
        assert d1.accepts(w) and not d2.accepts(w)
    eq, w = dfa_equivalent(d1, d2)
    if not eq:
        assert d1.accepts(w) != d2.accepts(w)
    else:
        assert all(d1.accepts(x) == d2.accepts(x) for x in words(2, 6))


@given(dfas())
def test_complement(d):
    c = complement_dfa(d)
    assert all(c.accepts(w) != d.accepts(w) for w in words(2, 5))


def test_prefix_closure_drops_states_without_infinite_continuation():
    # p -a-> q (q has no successors) and p -b-> p
    f = make_finite(("a", "b"), 2, 0, [(0, 0, 1), (0, 1, 0)], [0, 1])
    d = prefix_closure_dfa(f)
    assert d.accepts((1, 1)) and not d.accepts((0,))
    assert d.state_count == 2  # live state plus the rejecting sink
    assert live_state_count(d) == 1


def test_theju_prefix_dfa_has_six_states_with_sink():
    d = theju_prefix_dfa()
    assert d.state_count == 6
    assert live_state_count(d) == 5
    assert prefix_closure_dfa(zoo("theju")).state_count == 6


def test_restrict_alphabet_of_finite_automaton():
    f = make_finite(("a", "b", "c"), 3, 0, [(0, 0, 1), (0, 2, 2), (1, 1, 0)], [1])
    r = restrict_alphabet(f, ["a", "b"])
    assert r.alphabet.letters == ("a", "b") and r.state_count == 2


def test_classifier_labels_its_own_block_words():
    import random
    from omegazoo.sampling import random_accepted_word
    c = zoo("classifier")
    assert isinstance(c.dfa, FiniteAutomaton) and c.dfa.state_count == 12
    rng = random.Random(1)
    for label in c.finals.values():
        for _ in range(20):
            w = random_accepted_word(c.language(label), rng)
            assert classify(c, w) == label
