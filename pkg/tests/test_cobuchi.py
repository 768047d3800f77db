import random

import pytest

from omegazoo.automaton import COBUCHI, AutomatonError, Lasso, build
from omegazoo.cobuchi import (LongestSuffixResolver, SafeComponentView, all_states_equivalent,
                              cobuchi_hd_sufficient, cobuchi_minimality_verdict, hd_complement,
                              is_normal_cobuchi, is_safe_centralised, is_safe_deterministic,
                              is_safe_minimal, run_cobuchi_resolver, transitions_everywhere)
from omegazoo.finite import restrict_alphabet, prefix_closure_dfa, build_safe
from omegazoo.hd import check_simplified, zoo_hints
from omegazoo.iso import isomorphic
from omegazoo.omega import lasso_accepts
from omegazoo.references import reference
from omegazoo.sampling import random_lasso
from omegazoo.separation import cmain_safe_restricted
from omegazoo.zoo import zoo


@pytest.fixture(scope="module")
def cmain():
    return zoo("cmain")


def test_complement_of_amain_is_the_catalogue_cmain():
    a = zoo("amain")
    res = check_simplified(a, reference("lmain"), None, zoo_hints("amain", a))
    c = hd_complement(a, res.certificate)
    assert c.state_count == 61 and c.acceptance == COBUCHI
    same, mapping = isomorphic(c, zoo("cmain"))
    assert same and mapping[c.initial] == zoo("cmain").initial


def test_complement_needs_a_certificate():
    with pytest.raises(AutomatonError):
        hd_complement(zoo("amain"), None)


def test_complement_of_small_simplified_automaton_is_exact():
    a = zoo("astrong")
    res = check_simplified(a, reference("lstrong"), None, zoo_hints("astrong", a))
    c = hd_complement(a, res.certificate)
    rng = random.Random(2)
    for _ in range(300):
        w = random_lasso(a.alphabet, rng, 14)
        assert lasso_accepts(a, w) != lasso_accepts(c, w)


def test_cmain_structural_checks(cmain):
    assert is_safe_deterministic(cmain)
    assert is_normal_cobuchi(cmain)
    assert transitions_everywhere(cmain) == []
    assert all_states_equivalent(cmain)


def test_cmain_has_two_safe_components(cmain):
    view = SafeComponentView(cmain)
    y = cmain.state("Y")
    assert len(set(view.component)) == 2
    assert sum(1 for c in view.component if c == view.component[y]) == 1


def test_cmain_live_sizes_are_symmetric(cmain):
    sizes = dict(zip(cmain.state_names, SafeComponentView(cmain).live_sizes()))
    assert sizes.pop("Y") == 1
    assert set(sizes.values()) == {60}


def test_cmain_safe_minimality_words_are_verified(cmain):
    r = is_safe_minimal(cmain)
    assert r.ok and len(r.witnesses) == 1830 == 61 * 60 // 2
    dfas = SafeComponentView(cmain).safe_dfas
    for w in r.witnesses[:200]:
        assert dfas[w.first].accepts(w.word) and not dfas[w.second].accepts(w.word)


def test_cmain_centralised_in_both_directions(cmain):
    r = is_safe_centralised(cmain)
    assert r.ok
    dfas = SafeComponentView(cmain).safe_dfas
    for w in r.witnesses:
        assert dfas[w.first].accepts(w.word) and not dfas[w.second].accepts(w.word)


def test_cmain_minimality_verdict(cmain):
    r = cobuchi_minimality_verdict(cmain)
    assert r.verdict == "statewise minimal" and r.failed_checks() == []


def test_cmain_restricted_safe_part_sizes():
    c = zoo("cmain")
    circles = [q for q in c.state_names if q.startswith("(")]
    sizes = {q: cmain_safe_restricted(q).state_count for q in circles}
    assert sizes["(p2)"] == 15
    assert all(v == 15 for v in sizes.values())
    squares = {q: cmain_safe_restricted(q).state_count for q in c.state_names if q.startswith("[")}
    # squares whose digit survives the restriction lose more states
    assert {q for q, v in squares.items() if v == 10} == {f"[{k}{i}]" for k in "pqrst" for i in (1, 4)}
    assert {v for v in squares.values()} == {10, 15}


def test_checks_fail_on_a_bad_cobuchi_automaton():
    # safe nondeterminism on (p, a) and a safe edge leaving p's component
    c = build("bad", ("a", "b"), ("p", "q"), "p",
              [("p", "a", "p", False), ("p", "a", "q", False), ("q", "a", "q", False), ("p", "b", "q", True),
               ("q", "b", "p", True), ("q", "b", "q", True), ("q", "a", "p", True), ("p", "b", "p", True)],
              acceptance=COBUCHI)
    assert not is_safe_deterministic(c)
    assert not is_normal_cobuchi(c)
    r = cobuchi_minimality_verdict(c)
    assert r.verdict == "not certified"
    assert {"normal", "safe-deterministic"} <= set(r.failed_checks())


def test_safe_minimal_reports_equal_safe_languages():
    c = build("twins", ("a",), ("p", "q"), "p",
              [("p", "a", "p", False), ("q", "a", "q", False), ("p", "a", "q", True), ("q", "a", "p", True)],
              acceptance=COBUCHI)
    r = is_safe_minimal(c)
    assert not r.ok and r.failures == ((0, 1),)


def test_cmain_resolver_accepts_exactly_the_complement_words(cmain):
    ok, r = cobuchi_hd_sufficient(cmain)
    assert ok and isinstance(r, LongestSuffixResolver)
    rng = random.Random(4)
    for _ in range(300):
        w = random_lasso(cmain.alphabet, rng, 20)
        accepted, cycle = run_cobuchi_resolver(r, w)
        assert accepted == lasso_accepts(cmain, w)
        assert cycle


def test_non_cobuchi_input_is_rejected():
    with pytest.raises(AutomatonError):
        is_safe_deterministic(zoo("abkks"))
