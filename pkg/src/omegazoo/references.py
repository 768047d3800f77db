"""Reference languages of the shape (Σ*·X·Σ*·y)^ω as guess-the-infix Büchi monitors.

X is a three-block infix (first + r_first)·L_second·L_second with first ≠ second, where the
block languages L_k come from a classifier DFA (a word is in L_k iff its run ends at the
final state labelled k).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .automaton import BUCHI, Automaton, AutomatonError, Lasso, Transition
from .finite import ClassifierDfa, FiniteAutomaton, make_finite
from .omega import lasso_accepts
from .zoo import STRONG_IDX, WEAK_LETTERS, build_classifier

STRONG_LETTERS = ("a", "b", "c", "x", "y")


@dataclass(frozen=True)
class ReferenceLanguage:
    key: str
    automaton: Automaton
    infix: FiniteAutomaton
    separator: str = "y"
    prefix_independent: bool = True

    @property
    def alphabet(self):
        return self.automaton.alphabet

    def member(self, w: Lasso) -> bool:
        return lasso_accepts(self.automaton, w)

    def member_text(self, text: str) -> bool:
        return self.member(Lasso.parse(text, self.alphabet))


def xy_classifier(letters, stray: bool = False) -> ClassifierDfa:
    """Classifier for L_α = (x*y*)*·x·α over the letters a, b, c.

    With stray, letters a, b, c outside an x-run are skipped, giving
    (a+b+c+y+x⁺y)*·x⁺·α, the block language the gadget automata realise.
    """
    li = {x: i for i, x in enumerate(letters)}
    names = ["s0", "s1"] + [f"l{al}" for al in STRONG_IDX] + ["sink"]
    idx = {n: i for i, n in enumerate(names)}
    edges = []
    for s in ("s0", "s1"):
        edges.append((idx[s], li["x"], idx["s1"]))
        edges.append((idx[s], li["y"], idx["s0"]))
    for al in STRONG_IDX:
        edges.append((idx["s1"], li[al], idx[f"l{al}"]))
        if stray:
            edges.append((idx["s0"], li[al], idx["s0"]))
    for s in names:
        for x in letters:
            if not any(e[0] == idx[s] and e[1] == li[x] for e in edges):
                edges.append((idx[s], li[x], idx["sink"]))
    dfa = make_finite(letters, len(names), 0, edges, [idx[f"l{al}"] for al in STRONG_IDX], names)
    return ClassifierDfa(dfa, {idx[f"l{al}"]: al for al in STRONG_IDX})


def infix_nfa(cls: ClassifierDfa, resets: dict | None = None) -> FiniteAutomaton:
    """NFA for ⋃_{α≠β} (L_α + r_α)·L_β·L_β; the last state is the unique accepting one."""
    d = cls.dfa
    m = len(d.alphabet)
    labels = sorted(cls.finals.values(), key=str)
    dead = {q for q in range(d.state_count) if q != d.initial and q not in cls.finals
            and all(d.target(q, x) == q for x in range(m))}
    interior = [q for q in range(d.state_count) if q not in cls.finals and q not in dead]
    nodes: dict[tuple, int] = {}

    def node(key):
        if key not in nodes:
            nodes[key] = len(nodes)
        return nodes[key]

    start = node(("first", None, d.initial))
    edges = []
    for phase in ("first", "second", "third"):
        for lab in ([None] if phase == "first" else labels):
            for q in interior:
                src = node((phase, lab, q))
                for x in range(m):
                    t = d.target(q, x)
                    if t is None or t in dead:
                        continue
                    if t not in cls.finals:
                        edges.append((src, x, node((phase, lab, t))))
                        continue
                    got = cls.finals[t]
                    if phase == "first":
                        edges.append((src, x, node(("second", got, d.initial))))
                    elif phase == "second" and got != lab:
                        edges.append((src, x, node(("third", got, d.initial))))
                    elif phase == "third" and got == lab:
                        edges.append((src, x, node(("done", None, None))))
    for lab, letter in (resets or {}).items():
        edges.append((start, d.alphabet.index(letter), node(("second", lab, d.initial))))
    done = node(("done", None, None))
    # renumber so the accepting state is last
    order = sorted(nodes.values(), key=lambda v: (v == done, v))
    remap = {v: i for i, v in enumerate(order)}
    names = {v: k for k, v in nodes.items()}
    return make_finite(d.alphabet, len(nodes), remap[start],
                       [(remap[s], x, remap[t]) for s, x, t in edges], [remap[done]],
                       [_node_name(names[v]) for v in order])


def _node_name(key) -> str:
    phase, lab, q = key
    return phase if lab is None and q is None else f"{phase}:{lab}:{q}"


def monitor(key: str, infix: FiniteAutomaton, separator: str = "y") -> Automaton:
    """Büchi automaton for (Σ*·X·Σ*·separator)^ω with X given by infix (one accepting state)."""
    m = len(infix.alphabet)
    (done,) = infix.accepting
    n = infix.state_count
    idle = n
    states = [infix.name_of(q) for q in range(n)] + ["idle"]
    sep = infix.alphabet.index(separator)
    trans = []
    for q, x, t in infix.transitions():
        trans.append(Transition(q, x, t, False))
        if q == infix.initial:
            trans.append(Transition(idle, x, t, False))
    for x in range(m):
        trans.append(Transition(idle, x, idle, False))
        trans.append(Transition(done, x, done, False) if x != sep else Transition(done, x, idle, True))
    trans = list(dict.fromkeys(trans))
    return Automaton(key, infix.alphabet, tuple(states), idle, tuple(trans), BUCHI)


@lru_cache(maxsize=None)
def reference(key: str) -> ReferenceLanguage:
    if key == "lmain":
        cls = build_classifier()
        x = infix_nfa(cls, {i: f"r{i}" for i in range(1, 7)})
    elif key in ("lstrong", "lstrong_literal"):
        x = infix_nfa(xy_classifier(STRONG_LETTERS, stray=key == "lstrong"))
    elif key in ("lweak", "lweak_literal"):
        x = infix_nfa(xy_classifier(WEAK_LETTERS, stray=key == "lweak"),
                      {al: f"r{al}" for al in STRONG_IDX})
    else:
        raise AutomatonError(f"unknown reference language {key!r}; known: {', '.join(REFERENCE_KEYS)}")
    return ReferenceLanguage(key, monitor(key, x), x)


REFERENCE_KEYS = ("lmain", "lstrong", "lweak", "lstrong_literal", "lweak_literal")
