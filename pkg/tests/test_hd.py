import copy
import json
from pathlib import Path

import pytest

from omegazoo.automaton import AutomatonError, Lasso, build
from omegazoo.hd import (check_reach_covering, check_semantic_determinism, check_simplified,
                         check_upper_bound_exact, count_rewirings, cycle_lassos, enumerate_rewirings,
                         load_fact_suite, refute_rewiring, refute_rewiring_exact,
                         verify_all_states_accept_reference, verify_language_upper_bound, zoo_hints)
from omegazoo.langexpr import compile_expr
from omegazoo.omega import lasso_accepts
from omegazoo.references import reference
from omegazoo.zoo import zoo

DATA = Path(__file__).parents[1] / "src" / "omegazoo" / "data"


def simplified(key, facts=None):
    a = zoo(key)
    ref = {"astrong": "lstrong", "aweak": "lweak"}.get(key, "lmain")
    suite = load_fact_suite(facts) if facts else None
    return a, check_simplified(a, reference(ref), suite, zoo_hints(key, a))


def names(a, mapping):
    return {a.state_names[p]: a.state_names[q] for p, q in mapping.items()}


def test_amain_is_simplified_with_the_expected_covering():
    a, res = simplified("amain", "amain_facts")
    assert res.ok, res.diagnosis
    assert names(a, res.certificate.covering) == {"I": "(p1)", "I_a": "(q1)", "I_b": "(r1)", "I_c": "(t1)"}
    assert res.verdict == "history-deterministic"


def test_amain_fact_suite_holds_for_all_159_facts():
    rep = verify_language_upper_bound(zoo("amain"), load_fact_suite("amain_facts"))
    assert rep.ok and len(rep.outcomes) == 159 and not rep.structural


def test_amain_drawn_fails_reach_covering():
    a = zoo("amain_drawn")
    cov = check_reach_covering(a, zoo_hints("amain_drawn", a))
    assert cov.mapping is None
    assert a.state_names[cov.failing] in {"I", "I_a", "I_b", "I_c"}


def test_astrong_covering():
    a, res = simplified("astrong")
    assert res.ok
    assert names(a, res.certificate.covering) == {"I": "q_a", "i_a": "q'_a", "i_b": "q'_b", "i_c": "q'_c"}


def test_reach_covering_without_hints_still_finds_a_covering():
    a = zoo("astrong")
    assert check_reach_covering(a).mapping is not None


def test_not_normal_automaton_is_rejected():
    a = build("n", ("a",), ("p", "q"), "p", [("p", "a", "q", False), ("q", "a", "q", True)])
    assert check_simplified(a).diagnosis == "not normal"


def test_without_reference_semantic_determinism_stays_undecided():
    a = zoo("astrong")
    res = check_simplified(a, None, None, zoo_hints("astrong", a))
    assert not res.ok and "undecided" in res.diagnosis


def test_every_amain_state_accepts_the_main_language():
    assert verify_all_states_accept_reference(zoo("amain"), reference("lmain")).ok


def test_dweak_drawn_accepts_a_word_outside_the_weak_language():
    a, ref = zoo("dweak_drawn"), reference("lweak")
    rep = check_upper_bound_exact(a, ref)
    assert not rep.ok
    w = rep.failures[a.initial]
    assert lasso_accepts(a, w) and not ref.member(w)
    assert check_semantic_determinism(zoo("dweak"), ref).ok


def test_dstrong_fact_suite_and_semantic_determinism():
    d = zoo("dstrong")
    suite = load_fact_suite("dstrong_facts")
    assert verify_language_upper_bound(d, suite).ok
    assert check_semantic_determinism(d, reference("lstrong"), suite).ok


def test_dstrong_fact_from_p_prime_c_is_false():
    obj = json.loads((DATA / "dstrong_facts.json").read_text())
    obj = copy.deepcopy(obj)
    fact = next(f for f in obj["facts"] if f["src"] == "p_c")
    fact["src"] = "p'_c"
    obj["assembly"]["sets"].append(["p'_c"])
    rep = verify_language_upper_bound(zoo("dstrong"), load_fact_suite(obj))
    bad = rep.failures()
    assert len(bad) == 1
    d = zoo("dstrong")
    assert d.alphabet.render(bad[0].witness) == "a x a"


def test_fact_suite_reports_structural_gaps():
    obj = json.loads((DATA / "dstrong_facts.json").read_text())
    obj["assembly"]["sets"] = obj["assembly"]["sets"][:2]  # drop p_c and Y
    rep = verify_language_upper_bound(zoo("dstrong"), load_fact_suite(obj))
    assert not rep.ok
    assert any("p_c" in p and "not recurrent" in p for p in rep.structural)
    obj["assembly"]["sets"].append(["q_a"])  # some accepting cycle avoids q_a
    rep = verify_language_upper_bound(zoo("dstrong"), load_fact_suite(obj))
    assert any("avoids" in p for p in rep.structural)


def test_malformed_fact_suite_is_reported():
    with pytest.raises(AutomatonError, match="missing"):
        load_fact_suite({"automaton": "x"})
    with pytest.raises(AutomatonError, match="cannot read"):
        load_fact_suite("no_such_suite")


def test_language_expressions():
    ab = zoo("astrong").alphabet
    f = compile_expr({"seq": [{"sigma_star": True}, {"word": "x a"}, {"sigma_minus": ["y"]}]}, ab)
    assert f.accepts(ab.tokenize("y x a b")) and not f.accepts(ab.tokenize("x a y"))
    g = compile_expr({"over": {"vars": {"v": ["a", "b"]}, "when": "v!=a", "expr": {"plus": {"word": "{v}"}}}}, ab)
    assert g.accepts(ab.tokenize("b b")) and not g.accepts(ab.tokenize("a"))


def test_rewiring_counts():
    a, res = simplified("astrong")
    singles = list(enumerate_rewirings(a, res.certificate, "single"))
    assert len(singles) == 13
    assert all(len(rw.choice) == 1 and a.state_names[rw.choice[0][0]] == "Y" for rw in singles)
    a, res = simplified("aweak")
    assert count_rewirings(a, res.certificate) == 13 ** 4
    with pytest.raises(AutomatonError):
        next(enumerate_rewirings(a, res.certificate, "bogus"))


def test_refutation_witnesses_are_genuine():
    a, res = simplified("astrong")
    ref = reference("lstrong")
    for rw in enumerate_rewirings(a, res.certificate, "single"):
        r = refute_rewiring_exact(rw.automaton, ref)
        assert r.refuted
        assert lasso_accepts(rw.automaton, r.witness) and not ref.member(r.witness)


def test_cycle_lassos_enumerate_accepted_lassos_within_bound():
    d = zoo("dstrong")
    ws = []
    for w in cycle_lassos(d, 9):
        ws.append(w)
        if len(ws) >= 300:
            break
    assert ws and all(len(w) <= 9 and lasso_accepts(d, w) for w in ws)


def test_refute_rewiring_search_finds_a_counterexample_for_a_bad_deterministic_automaton():
    # accepts y^omega, which lacks any block
    ab = zoo("dstrong").alphabet
    b = build("bad", ab.letters, ("p",), "p", [("p", x, "p", x == "y") for x in ab.letters])
    r = refute_rewiring(b, reference("lstrong"), bound=4)
    assert r.refuted and r.source == "search"
    assert not reference("lstrong").member(r.witness)


def test_dstrong_not_refuted_at_small_bound():
    # the bound-10 enumeration is exhausted before the lasso cap
    r = refute_rewiring(zoo("dstrong"), reference("lstrong"), bound=10, max_lassos=5000)
    assert not r.refuted and 0 < r.checked < 5000
