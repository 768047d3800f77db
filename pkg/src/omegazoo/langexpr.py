"""Finite-word language expressions (JSON-shaped) compiled to NFAs.

Forms:
  {"sigma_star": true}  {"sigma": true}  {"eps": true}  {"empty": true}
  {"word": "x a"}                       a fixed word, tokenized over the alphabet
  {"letters": ["a", "b"]}               one letter from a set
  {"block": "2"}                        the classifier language with that final label
  {"state": "p"}                        words whose classifier run ends in the named state
  {"sigma_minus": ["y"]}                one letter outside the set
  {"seq": [e, ...]}  {"alt": [e, ...]}  {"star": e}  {"plus": e}
  {"over": {"vars": {"a": [...], ...}, "when": "a!=b", "expr": e}}
                                        union over assignments; "{a}" in strings is substituted
"""

from __future__ import annotations

import itertools
import json
import re

from .automaton import Alphabet, AutomatonError
from .finite import ClassifierDfa, FiniteAutomaton, make_finite


class LangExprError(AutomatonError):
    pass


class _Eps:
    """ε-NFA under construction: edges (src, letter or None, dst)."""

    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int | None, int]] = []

    def new(self) -> int:
        self.n += 1
        return self.n - 1


def substitute(obj, env: dict[str, str]):
    """Replace {var} in every string of a JSON-shaped value."""
    if isinstance(obj, str):
        return re.sub(r"\{(\w+)\}", lambda m: env.get(m.group(1), m.group(0)), obj)
    if isinstance(obj, list):
        return [substitute(x, env) for x in obj]
    if isinstance(obj, dict):
        return {k: substitute(v, env) for k, v in obj.items()}
    return obj


def condition_holds(when: str | None, env: dict[str, str]) -> bool:
    """Conjunction of comparisons like "a!=b, b==c" over variable names."""
    if not when:
        return True
    for part in when.split(","):
        m = re.fullmatch(r"\s*(\w+)\s*(==|!=)\s*(\w+)\s*", part)
        if not m:
            raise LangExprError(f"bad condition {part!r}")
        lhs, op, rhs = m.groups()
        left, right = env.get(lhs, lhs), env.get(rhs, rhs)
        if (left == right) != (op == "=="):
            return False
    return True


def assignments(vars_: dict[str, list], when: str | None):
    names = sorted(vars_)
    for values in itertools.product(*(vars_[v] for v in names)):
        env = {k: str(v) for k, v in zip(names, values)}
        if condition_holds(when, env):
            yield env


def compile_expr(expr, alphabet: Alphabet, classifier: ClassifierDfa | None = None) -> FiniteAutomaton:
    """NFA (no ε) for a language expression."""
    g = _Eps()
    s, t = _build(expr, g, alphabet, classifier)
    return _eliminate(g, s, t, alphabet)


def _build(e, g: _Eps, alphabet: Alphabet, cls) -> tuple[int, int]:
    if not isinstance(e, dict) or len(e) != 1:
        raise LangExprError(f"expression must be a one-key object: {json.dumps(e)[:80]}")
    (kind, arg), = e.items()
    s, t = g.new(), g.new()
    m = len(alphabet)
    if kind == "sigma_star":
        for x in range(m):
            g.edges.append((s, x, s))
        g.edges.append((s, None, t))
    elif kind == "sigma":
        g.edges += [(s, x, t) for x in range(m)]
    elif kind == "eps":
        g.edges.append((s, None, t))
    elif kind == "empty":
        pass
    elif kind == "word":
        prev = s
        for x in alphabet.tokenize(arg):
            nxt = g.new()
            g.edges.append((prev, x, nxt))
            prev = nxt
        g.edges.append((prev, None, t))
    elif kind == "letters":
        g.edges += [(s, alphabet.index(x), t) for x in arg]
    elif kind == "sigma_minus":
        skip = {alphabet.index(x) for x in arg}
        g.edges += [(s, x, t) for x in range(m) if x not in skip]
    elif kind in ("block", "state"):
        if cls is None:
            raise LangExprError("block languages need a classifier")
        d = cls.dfa
        if kind == "block":
            labels = {str(v): q for q, v in cls.finals.items()}
        else:
            labels = {d.name_of(q): q for q in range(d.state_count)}
        if str(arg) not in labels:
            raise LangExprError(f"unknown {kind} {arg!r}")
        if tuple(d.alphabet.letters) != tuple(alphabet.letters):
            raise LangExprError("classifier alphabet differs from the automaton's")
        base = g.n
        g.n += d.state_count
        for q, x, r in d.transitions():
            g.edges.append((base + q, x, base + r))
        g.edges.append((s, None, base + d.initial))
        g.edges.append((base + labels[str(arg)], None, t))
    elif kind in ("seq", "alt"):
        if not isinstance(arg, list):
            raise LangExprError(f"{kind} needs a list")
        if kind == "seq":
            prev = s
            for sub in arg:
                a, b = _build(sub, g, alphabet, cls)
                g.edges.append((prev, None, a))
                prev = b
            g.edges.append((prev, None, t))
        else:
            for sub in arg:
                a, b = _build(sub, g, alphabet, cls)
                g.edges += [(s, None, a), (b, None, t)]
    elif kind in ("star", "plus"):
        a, b = _build(arg, g, alphabet, cls)
        g.edges += [(s, None, a), (b, None, t), (b, None, a)]
        if kind == "star":
            g.edges.append((s, None, t))
    elif kind == "over":
        parts = [substitute(arg["expr"], env) for env in assignments(arg["vars"], arg.get("when"))]
        return _build({"alt": parts}, g, alphabet, cls)
    else:
        raise LangExprError(f"unknown expression kind {kind!r}")
    return s, t


def _eliminate(g: _Eps, start: int, final: int, alphabet: Alphabet) -> FiniteAutomaton:
    eps = [[] for _ in range(g.n)]
    moves = [[] for _ in range(g.n)]
    for a, x, b in g.edges:
        (eps[a].append(b) if x is None else moves[a].append((x, b)))

    def closure(q):
        seen, stack = {q}, [q]
        while stack:
            v = stack.pop()
            for w in eps[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    closures = [closure(q) for q in range(g.n)]
    edges = {(q, x, d) for q in range(g.n) for p in closures[q] for x, d in moves[p]}
    accepting = [q for q in range(g.n) if final in closures[q]]
    return make_finite(alphabet, g.n, start, sorted(edges), accepting)
