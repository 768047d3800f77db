"""Builders for the named automata of the workbench."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .automaton import BUCHI, COBUCHI, Automaton, AutomatonError, build, is_deterministic, validate
from .finite import ClassifierDfa, FiniteAutomaton, make_finite

E = ("1", "2", "3")
F = ("4", "5", "6")
DIGITS = E + F
RESETS = tuple(f"r{i}" for i in range(1, 7))
ABC = ("a", "b", "c")
MAIN_LETTERS = ABC + DIGITS + RESETS + ("y",)
BLOCK = ("p", "q", "r", "s", "t")
TOP = ("I", "I_a", "I_b", "I_c")


def circ(kind: str, i) -> str:
    return f"({kind}{i})"


def sq(kind: str, i) -> str:
    return f"[{kind}{i}]"


# Transitions of the five-state block over a, b, c (shared by the classifier and every block).
BLOCK_ABC = {
    "p": {"a": "q", "b": "p", "c": "t"},
    "q": {"a": "q", "b": "r", "c": "s"},
    "r": {"a": "q", "b": "r", "c": "s"},
    "s": {"a": "q", "b": "r", "c": "s"},
    "t": {"a": "q", "b": "p", "c": "t"},
}


def block_digit(kind: str, d: str):
    """Classifier step on a digit: ('reset', None) back to p, or ('done', d) when a block word ends."""
    if kind in ("p", "q"):
        return "reset", None
    if kind in ("t", "s"):
        return ("done", d) if d in E else ("reset", None)
    return ("done", d) if d in F else ("reset", None)


# ---------------------------------------------------------------- small examples

def build_abkks() -> Automaton:
    t = [
        ("I", "x", "i_a", False), ("I", "x", "i_b", False),
        ("i_a", "b", "I", False), ("i_b", "a", "I", False),
        ("i_a", "a", "p_a", True), ("i_b", "b", "p_b", True),
        ("p_a", "x", "m_a", False), ("p_b", "x", "m_b", False),
        ("m_a", "b", "p_b", False), ("m_b", "a", "p_a", False),
        ("m_a", "a", "I", True), ("m_b", "b", "I", True),
    ]
    return build("abkks", ("x", "a", "b"), ("I", "i_a", "i_b", "p_a", "p_b", "m_a", "m_b"), "I", t)


def build_fig2_nonhd() -> Automaton:
    t = [("s0", "a", "s0", False), ("s0", "b", "s0", False), ("s0", "a", "s1", False),
         ("s1", "a", "s1", True), ("s1", "b", "s2", False),
         ("s2", "a", "s2", False), ("s2", "b", "s2", False)]
    return build("fig2_nonhd", ("a", "b"), ("s0", "s1", "s2"), "s0", t)


# ---------------------------------------------------------------- strong / weak gadgets

STRONG_IDX = ("a", "b", "c")


def _gadget_body(weak: bool) -> list[tuple[str, str, str, bool]]:
    """Transitions among p, p', q, q' shared by the strong and weak automata."""
    t = []
    for al in STRONG_IDX:
        others = [b for b in STRONG_IDX if b != al]
        for x in ("y",) + STRONG_IDX:
            t.append((f"p_{al}", x, f"p_{al}", False))
            t.append((f"q_{al}", x, f"q_{al}", False))
        t.append((f"p_{al}", "x", f"p'_{al}", False))
        t.append((f"p'_{al}", al, f"p_{al}", False))
        t.append((f"p'_{al}", "y", f"p_{al}", False))
        t.append((f"p'_{al}", "x", f"p'_{al}", False))
        for b in others:
            t.append((f"p'_{al}", b, f"q_{b}", not weak))
        t.append((f"q_{al}", "x", f"q'_{al}", False))
        t.append((f"q'_{al}", "y", f"q_{al}", False))
        t.append((f"q'_{al}", "x", f"q'_{al}", False))
        t.append((f"q'_{al}", al, "Y", True))
        for b in others:
            t.append((f"q'_{al}", b, f"q_{b}", False))
    return t


GADGET_STATES = tuple(f"{k}_{al}" for k in ("p", "p'", "q", "q'") for al in STRONG_IDX)


def _top_strong(weak: bool) -> list[tuple[str, str, str, bool]]:
    t = []
    for x in ("y",) + STRONG_IDX:
        t.append(("I", x, "I", False))
    for al in STRONG_IDX:
        t.append(("I", "x", f"i_{al}", False))
        t.append((f"i_{al}", "x", f"i_{al}", False))
        t.append((f"i_{al}", "y", "I", False))
        t.append((f"i_{al}", al, f"p_{al}", True))
        for b in STRONG_IDX:
            if b != al:
                t.append((f"i_{al}", b, "I", False))
    return t


def build_astrong() -> Automaton:
    t = _top_strong(False) + _gadget_body(False)
    t += [("Y", x, "Y", False) for x in ("x",) + STRONG_IDX] + [("Y", "y", "I", True)]
    states = ("I", "i_a", "i_b", "i_c") + GADGET_STATES + ("Y",)
    return build("astrong", ("a", "b", "c", "x", "y"), states, "I", t)


def build_dstrong() -> Automaton:
    t = [tr for tr in _gadget_body(False) if not tr[0].startswith("p'_") or tr[3] is False]
    t += [("p'_a", "b", "p_b", True), ("p'_a", "c", "p_b", True),
          ("p'_b", "a", "p_c", True), ("p'_b", "c", "p_c", True),
          ("p'_c", "a", "q_a", True), ("p'_c", "b", "q_b", True)]
    t += [("Y", x, "Y", False) for x in ("x",) + STRONG_IDX] + [("Y", "y", "p_a", True)]
    states = GADGET_STATES + ("Y",)
    return build("dstrong", ("a", "b", "c", "x", "y"), states, "p_a", t)


WEAK_LETTERS = ("a", "b", "c", "x", "y", "ra", "rb", "rc")


def build_aweak() -> Automaton:
    t = _top_strong(True) + _gadget_body(True)
    t += [("Y", x, "Y", False) for x in ("x",) + STRONG_IDX + ("ra", "rb", "rc")]
    t.append(("Y", "y", "I", True))
    for s in ("I", "i_a", "i_b", "i_c"):
        for al in STRONG_IDX:
            t.append((s, f"r{al}", f"p_{al}", True))
    for s in GADGET_STATES:
        for al in STRONG_IDX:
            t.append((s, f"r{al}", f"p_{al}", False))
    states = ("I", "i_a", "i_b", "i_c") + GADGET_STATES + ("Y",)
    return build("aweak", WEAK_LETTERS, states, "I", t)


def build_dweak(reset_memory: bool = True) -> Automaton:
    """With reset_memory, Y_α on reset r_β moves to Y_β instead of looping."""
    t = []
    for tr in _gadget_body(True):
        if tr[2] == "Y":
            tr = (tr[0], tr[1], f"Y_{tr[1]}", True)
        t.append(tr)
    for s in GADGET_STATES:
        for al in STRONG_IDX:
            t.append((s, f"r{al}", f"p_{al}", False))
    for al in STRONG_IDX:
        y = f"Y_{al}"
        for x in WEAK_LETTERS:
            if x == "y":
                continue
            dst = f"Y_{x[1]}" if reset_memory and x.startswith("r") else y
            t.append((y, x, dst, False))
        t.append((y, "y", f"p_{al}", True))
    states = GADGET_STATES + ("Y_a", "Y_b", "Y_c")
    return build("dweak" if reset_memory else "dweak_drawn", WEAK_LETTERS, states, "p_a", t)


# ---------------------------------------------------------------- replacement gadget

REPLACE_BLOCK = {
    "0": {"b": "0", "1": "0", "2": "0", "a": "3", "c": "1"},
    "3": {"1": "0", "2": "0", "a": "3", "c": "2", "b": "4"},
    "1": {"a": "3", "b": "0", "c": "1"},
    "2": {"a": "3", "c": "2", "b": "4"},
    "4": {"a": "3", "b": "4", "c": "2"},
}


def build_areplace() -> Automaton:
    t = []
    for x in ("a", "b", "1", "2"):
        t.append(("I", x, "I", False))
    t += [("I", "a", "i_a", False), ("I", "c", "i_c", False),
          ("i_a", "1", "I", False), ("i_a", "2", "I", False), ("i_a", "a", "i_a", False),
          ("i_a", "c", "i_a", False), ("i_a", "b", "i_b", False),
          ("i_b", "c", "i_a", False), ("i_b", "a", "i_a", False), ("i_b", "1", "i_a", False),
          ("i_b", "b", "i_b", False), ("i_b", "2", "r0", False),
          ("i_c", "b", "I", False), ("i_c", "a", "I", False), ("i_c", "2", "I", False),
          ("i_c", "c", "i_c", False), ("i_c", "1", "l0", False)]
    for side in ("l", "r"):
        for src, row in REPLACE_BLOCK.items():
            for x, dst in row.items():
                t.append((side + src, x, side + dst, False))
    t += [("l1", "1", "I", True), ("l2", "1", "I", True),
          ("l1", "2", "l0", False), ("l2", "2", "l0", False),
          ("l4", "2", "r0", False), ("l4", "1", "l0", False),
          ("r1", "1", "l0", False), ("r2", "1", "l0", False), ("r4", "1", "l0", False),
          ("r1", "2", "r0", False), ("r2", "2", "r0", False), ("r4", "2", "I", True)]
    states = ("I", "i_a", "i_b", "i_c") + tuple(f"{s}{k}" for s in "lr" for k in "01234")
    return build("areplace", ("a", "b", "c", "1", "2"), states, "I", t)


# ---------------------------------------------------------------- main automaton

def _blue_box_transitions() -> list[tuple[str, str, str, bool]]:
    """Non-significant transitions of the twelve blocks plus their significant exits to Y."""
    t = []
    for shape, name in (("circle", circ), ("square", sq)):
        for i in range(1, 7):
            own = str(i)
            for k in BLOCK:
                src = name(k, i)
                for x, dst in BLOCK_ABC[k].items():
                    t.append((src, x, name(dst, i), False))
                t.append((src, "y", name("p", i), False))
                for r in range(1, 7):
                    t.append((src, f"r{r}", circ("p", r), False))
                for d in DIGITS:
                    outcome, word = block_digit(k, d)
                    if outcome == "reset":
                        t.append((src, d, name("p", i), False))
                    elif shape == "circle":
                        t.append((src, d, circ("p", i) if word == own else sq("p", word), False))
                    elif word == own:
                        t.append((src, d, "Y", True))
                    else:
                        t.append((src, d, sq("p", word), False))
    return t


def _top_box_transitions(with_escape: bool) -> list[tuple[str, str, str, bool]]:
    t = []
    for x in ("a", "b") + DIGITS:
        t.append(("I", x, "I", False))
    t += [("I", "a", "I_a", False), ("I", "c", "I_c", False)]
    t += [("I_c", "c", "I_c", False), ("I_c", "b", "I", False), ("I_c", "a", "I_a", False)]
    if with_escape:
        t.append(("I_c", "a", "I", False))
    t += [("I_c", e, circ("p", e), True) for e in E]
    t += [("I_c", f, "I", False) for f in F]
    t += [("I_a", "a", "I_a", False), ("I_a", "c", "I_a", False), ("I_a", "b", "I_b", False)]
    t += [("I_a", d, "I", False) for d in DIGITS]
    t += [("I_b", "b", "I_b", False), ("I_b", "c", "I_a", False), ("I_b", "a", "I_a", False)]
    t += [("I_b", f, circ("p", f), True) for f in F]
    t += [("I_b", e, "I", False) for e in E]
    for s in TOP:
        t += [(s, f"r{i}", circ("p", i), True) for i in range(1, 7)]
        t.append((s, "y", "I", False))
    return t


MAIN_STATES = TOP + tuple(circ(k, i) for i in range(1, 7) for k in BLOCK) \
    + tuple(sq(k, i) for i in range(1, 7) for k in BLOCK) + ("Y",)


def build_amain(with_escape: bool = True) -> Automaton:
    """The 65-state automaton; with_escape adds I_c -a-> I (see the decisions log)."""
    t = _top_box_transitions(with_escape) + _blue_box_transitions()
    t += [("Y", x, "Y", False) for x in MAIN_LETTERS if x != "y"]
    t.append(("Y", "y", "I", True))
    return build("amain" if with_escape else "amain_drawn", MAIN_LETTERS, MAIN_STATES, "I", t)


def build_classifier() -> ClassifierDfa:
    """Deterministic classifier over the main alphabet; l1..l6 mark completed block words."""
    names = list(BLOCK) + [f"l{i}" for i in range(1, 7)] + ["sink"]
    idx = {n: i for i, n in enumerate(names)}
    letters = MAIN_LETTERS
    li = {x: i for i, x in enumerate(letters)}
    edges = []
    for k in BLOCK:
        for x, dst in BLOCK_ABC[k].items():
            edges.append((idx[k], li[x], idx[dst]))
        for d in DIGITS:
            outcome, word = block_digit(k, d)
            edges.append((idx[k], li[d], idx["p"] if outcome == "reset" else idx[f"l{word}"]))
        edges.append((idx[k], li["y"], idx["p"]))
        for r in RESETS:
            edges.append((idx[k], li[r], idx["sink"]))
    for n in names[5:]:
        for x in letters:
            edges.append((idx[n], li[x], idx["sink"]))
    dfa = make_finite(letters, len(names), idx["p"], edges, [idx[f"l{i}"] for i in range(1, 7)], names)
    return ClassifierDfa(dfa, {idx[f"l{i}"]: i for i in range(1, 7)})


def build_theju(with_y: bool = True) -> FiniteAutomaton:
    """Safety automaton (as an all-accepting partial DFA) for words with no prefix in a block language."""
    li = {x: i for i, x in enumerate(MAIN_LETTERS)}
    idx = {k: i for i, k in enumerate(BLOCK)}
    edges = []
    for k in BLOCK:
        for x, dst in BLOCK_ABC[k].items():
            edges.append((idx[k], li[x], idx[dst]))
        for d in DIGITS:
            outcome, _ = block_digit(k, d)
            if outcome == "reset":
                edges.append((idx[k], li[d], idx["p"]))
        if with_y:
            edges.append((idx[k], li["y"], idx["p"]))
    return make_finite(MAIN_LETTERS, 5, 0, edges, range(5), BLOCK)


def build_cmain() -> Automaton:
    """The 61-state coBüchi automaton, derived from the classifier run semantics.

    Safe moves inside a block follow the classifier; a completed block word leads to the
    p-state of the matching block (or leaves the safe part for the square block's own
    index); y returns to the block's p; resets go to the circle p-states; Y loops on all
    letters but y. Every other (state, letter, state) triple is significant.
    """
    cls = build_classifier()
    d = cls.dfa
    letters = MAIN_LETTERS
    states = tuple(circ(k, i) for i in range(1, 7) for k in BLOCK) \
        + tuple(sq(k, i) for i in range(1, 7) for k in BLOCK) + ("Y",)
    kidx = {k: i for i, k in enumerate(d.state_names)}
    safe: dict[tuple[str, str], str] = {}
    for square in (False, True):
        for i in range(1, 7):
            for k in BLOCK:
                src = (sq if square else circ)(k, i)
                for xi, x in enumerate(letters):
                    if x.startswith("r"):
                        safe[(src, x)] = circ("p", x[1:])
                        continue
                    nxt = d.name_of(d.target(kidx[k], xi))
                    if nxt in BLOCK:
                        safe[(src, x)] = (sq if square else circ)(nxt, i)
                    elif nxt.startswith("l"):
                        beta = int(nxt[1:])
                        if beta == i:
                            if not square:
                                safe[(src, x)] = circ("p", i)
                        else:
                            safe[(src, x)] = sq("p", beta)
    for x in letters:
        if x != "y":
            safe[("Y", x)] = "Y"
    t = []
    for s in states:
        for x in letters:
            keep = safe.get((s, x))
            for q in states:
                t.append((s, x, q, q != keep))
    return build("cmain", letters, states, circ("p", 1), t, acceptance=COBUCHI, dedupe=False)


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class ZooEntry:
    key: str
    builder: Callable
    description: str
    expected: dict = field(default_factory=dict)
    covering: dict = field(default_factory=dict)  # non-good state -> good state tried first
    reference: str | None = None  # key of the reference language, see references.py


ENTRIES = {
    e.key: e for e in [
        ZooEntry("abkks", build_abkks, "two-letter-pair HD example (7 states)",
                 {"states": 7, "deterministic": False},
                 {"I": "p_a", "i_a": "m_a", "i_b": "m_b"}),
        ZooEntry("fig2_nonhd", build_fig2_nonhd, "eventually-a automaton, not HD",
                 {"states": 3, "deterministic": False}),
        ZooEntry("astrong", build_astrong, "strong-rewiring counterexample",
                 {"states": 17, "deterministic": False, "normal": True},
                 {"I": "q_a", "i_a": "q'_a", "i_b": "q'_b", "i_c": "q'_c"}, "lstrong"),
        ZooEntry("dstrong", build_dstrong, "deterministic rewiring of astrong",
                 {"states": 13, "deterministic": True}, {}, "lstrong"),
        ZooEntry("aweak", build_aweak, "weak-rewiring counterexample",
                 {"states": 17, "deterministic": False, "normal": True},
                 {"I": "q_a", "i_a": "q'_a", "i_b": "q'_b", "i_c": "q'_c"}, "lweak"),
        ZooEntry("dweak", build_dweak, "determinisation of aweak with copies of Y",
                 {"states": 15, "deterministic": True}, {}, "lweak"),
        ZooEntry("dweak_drawn", lambda: build_dweak(reset_memory=False),
                 "dweak with Y-copies looping on resets",
                 {"states": 15, "deterministic": True}, {}, "lweak"),
        ZooEntry("areplace", build_areplace, "HD automaton whose nondeterministic part needs 5 states",
                 {"states": 14, "deterministic": False}),
        ZooEntry("amain", build_amain, "65-state HD Büchi automaton",
                 {"states": 65, "deterministic": False, "normal": True},
                 {"I": circ("p", 1), "I_a": circ("q", 1), "I_b": circ("r", 1), "I_c": circ("t", 1)},
                 "lmain"),
        ZooEntry("amain_drawn", lambda: build_amain(with_escape=False),
                 "65-state automaton without the I_c -a-> I transition",
                 {"states": 65, "deterministic": False, "normal": True},
                 {"I": circ("p", 1), "I_a": circ("q", 1), "I_b": circ("r", 1), "I_c": circ("t", 1)},
                 "lmain"),
        ZooEntry("cmain", build_cmain, "61-state HD coBüchi complement",
                 {"states": 61, "deterministic": False}),
        ZooEntry("classifier", build_classifier, "block-language classifier DFA",
                 {"states": 12, "deterministic": True}),
        ZooEntry("theju", build_theju, "safety automaton: no prefix in a block language",
                 {"states": 5, "deterministic": True}),
        ZooEntry("theju_y", lambda: build_theju(with_y=False), "theju without y",
                 {"states": 5, "deterministic": True}),
    ]
}


@lru_cache(maxsize=None)
def zoo(key: str):
    try:
        entry = ENTRIES[key]
    except KeyError:
        raise AutomatonError(f"unknown zoo key {key!r}; known: {', '.join(sorted(ENTRIES))}") from None
    obj = entry.builder()
    if isinstance(obj, Automaton):
        rep = validate(obj)
        if not rep.ok:
            raise AutomatonError(f"zoo entry {key} invalid: {rep.violations[:3]}")
    return obj


def check_expected(key: str) -> list[str]:
    """Mismatches between a zoo entry and its recorded invariants."""
    from .omega import is_normal
    entry = ENTRIES[key]
    obj = zoo(key)
    fa = obj.dfa if isinstance(obj, ClassifierDfa) else obj
    problems = []
    exp = entry.expected
    if "states" in exp and fa.state_count != exp["states"]:
        problems.append(f"states {fa.state_count} != {exp['states']}")
    if "deterministic" in exp:
        det = is_deterministic(fa) if isinstance(fa, Automaton) else fa.deterministic
        if det != exp["deterministic"]:
            problems.append(f"deterministic {det} != {exp['deterministic']}")
    if exp.get("normal") and isinstance(fa, Automaton) and fa.acceptance == BUCHI and not is_normal(fa):
        problems.append("not normal")
    return problems
