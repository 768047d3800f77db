import pytest
from hypothesis import given, settings, strategies as st

from omegazoo.automaton import Alphabet, AutomatonError
from omegazoo.finite import dfa_included, make_finite
from omegazoo.sat import SAT, UNSAT, sat_solve
from omegazoo.separation import (ACCEPT, DONTCARE, EXIT1, EXIT2, FREE, INSTANCES, REJECT, STAY,
                                 ExitMachine, ExitTask, ThreeDfa, brute_force_min_size,
                                 build_separation_3dfa, consistent_with, encode_exists_kdfa,
                                 exit_machine_realises, format_three_dfa, generated_instance,
                                 listed_instance, min_exit_machine, min_separator_size,
                                 parse_three_dfa, replace_task, separation_bounds, solve_kdfa,
                                 three_dfa_isomorphism, verify_separator)
from oracles import min_consistent_dfa_size

AB = Alphabet(("a", "b"))


@st.composite
def three_dfas(draw, max_states=4, letters=2):
    n = draw(st.integers(1, max_states))
    delta = tuple(tuple(draw(st.one_of(st.none(), st.integers(0, n - 1))) for _ in range(letters))
                  for _ in range(n))
    labels = tuple(draw(st.sampled_from([ACCEPT, REJECT, DONTCARE])) for _ in range(n))
    return ThreeDfa(Alphabet(("a", "b", "c")[:letters]), delta, labels)


@settings(max_examples=60)
@given(three_dfas(max_states=3))
def test_sat_minimum_matches_exhaustive_search(t):
    want = min_consistent_dfa_size(t, 3)
    if want is None:
        for k in (1, 2, 3):
            assert solve_kdfa(t, k).status == UNSAT
        return
    k, outcomes = min_separator_size(t, 3)
    assert k == want
    assert consistent_with(outcomes[-1].dfa, t)[0]


@settings(max_examples=30)
@given(three_dfas(max_states=3))
def test_package_brute_force_agrees_with_oracle(t):
    assert brute_force_min_size(t, 2) == min_consistent_dfa_size(t, 2)


@settings(max_examples=40)
@given(three_dfas(max_states=3))
def test_satisfiability_is_monotone_in_k(t):
    statuses = [solve_kdfa(t, k).status for k in range(1, 5)]
    first = statuses.index(SAT) if SAT in statuses else len(statuses)
    assert all(s == UNSAT for s in statuses[:first])
    assert all(s == SAT for s in statuses[first:])


@settings(max_examples=40)
@given(three_dfas(max_states=3))
def test_symmetry_breaking_keeps_satisfiability(t):
    for k in (1, 2, 3):
        with_sb = sat_solve(encode_exists_kdfa(t, k).cnf).status
        without = sat_solve(encode_exists_kdfa(t, k, symmetry=False).cnf).status
        assert with_sb == without


@given(three_dfas(max_states=5, letters=3))
def test_text_format_round_trip(t):
    back = parse_three_dfa(format_three_dfa(t), t.alphabet.letters)
    assert back == t


def test_parser_rejects_bad_input():
    with pytest.raises(AutomatonError):
        parse_three_dfa("")
    with pytest.raises(AutomatonError):
        parse_three_dfa("2 1\nt 0 0 1\nt 0 0 0\n")
    with pytest.raises(AutomatonError):
        parse_three_dfa("2 1\nz 0\n")


def test_completion_adds_reject_sink_once():
    t = ThreeDfa(AB, ((0, None),), (ACCEPT,))
    c = t.completed()
    assert c.state_count == 2 and c.labels[1] == REJECT
    assert c.label_of((1, 0)) == REJECT
    assert c.completed() is c


def test_consistency_counterexample_is_a_word():
    # Accept on "a", reject on "b"; the one-state rejecting DFA fails on "a".
    t = ThreeDfa(AB, ((1, 2), (1, 1), (2, 2)), (DONTCARE, ACCEPT, REJECT))
    b = make_finite(AB, 1, 0, [(0, 0, 0), (0, 1, 0)], [])
    ok, w = consistent_with(b, t)
    assert not ok and t.label_of(w) == ACCEPT


def test_product_requires_inclusion():
    any_word = make_finite(AB, 1, 0, [(0, 0, 0), (0, 1, 0)], [0])
    only_a = make_finite(AB, 1, 0, [(0, 0, 0)], [0])
    with pytest.raises(AutomatonError):
        build_separation_3dfa(any_word, only_a)
    t = build_separation_3dfa(only_a, any_word)
    k, outcomes = min_separator_size(t, 3)
    assert verify_separator(outcomes[-1].dfa, only_a, any_word)


@pytest.mark.parametrize("key", sorted(INSTANCES))
def test_listing_matches_generated_product(key):
    assert three_dfa_isomorphism(generated_instance(key), listed_instance(key)) is not None


@pytest.mark.parametrize("key", sorted(INSTANCES))
def test_minimum_separator_has_six_states(key):
    t = listed_instance(key)
    assert solve_kdfa(t, 5).status == UNSAT
    out = solve_kdfa(t, 6)
    assert out.status == SAT
    lower, upper = separation_bounds(key)
    assert verify_separator(out.dfa, lower, upper)
    assert dfa_included(lower, out.dfa)[0] and dfa_included(out.dfa, upper)[0]


def test_unknown_instance_is_rejected():
    with pytest.raises(AutomatonError):
        listed_instance("nope")


def test_replace_gadget_needs_five_states():
    k, machine, statuses = min_exit_machine(replace_task(), 6)
    assert k == 5
    assert statuses == [UNSAT] * 4 + [SAT]
    assert exit_machine_realises(machine, replace_task())[0]


def test_exit_check_finds_wrong_output():
    # Reading "a" must emit exit1; a silent machine fails on "a".
    task = ExitTask(AB, ((1, 0), (2, 2), (2, 2)), (STAY, EXIT1, FREE))
    silent = ExitMachine(AB, ((0, 0),), ((None, None),))
    assert exit_machine_realises(silent, task) == (False, (0,))
    right = ExitMachine(AB, ((0, 0),), ((EXIT1, None),))
    assert exit_machine_realises(right, task) == (True, None)
    wrong = ExitMachine(AB, ((0, 0),), ((EXIT2, None),))
    assert not exit_machine_realises(wrong, task)[0]
