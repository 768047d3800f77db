"""Simplified-automaton checks: semantic determinism, reach-covering, rewirings."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .automaton import BUCHI, Automaton, AutomatonError, Lasso, Transition, is_deterministic
from .finite import (FiniteAutomaton, ClassifierDfa, complete, determinize, make_finite,
                     nfa_disjoint_from_dfa, nfa_included_in_dfa, path_language, union_nfa)
from .games import simulates
from .graph import tarjan_scc
from .langexpr import LangExprError, assignments, compile_expr, substitute
from .omega import _bfs_path, build_reach, good_states, is_normal, lasso_accepts, redirect_transition


# ---------------------------------------------------------------- product-graph lassos

def _lasso_in_graph(start: int, adj: Sequence[Sequence[tuple[int, int, bool]]],
                    comp: Sequence[int], accepting_edge: tuple[int, int, int]) -> Lasso:
    """Lasso from start into the edge v -x-> u and back to v inside v's component.

    adj[v] lists (u, letter, flag); comp may mark nodes outside the allowed subgraph with -1.
    """
    v, x, u = accepting_edge
    _, prefix = _bfs_path(start, lambda n: n == v, lambda n: ((w, y) for w, y, _ in adj[n]))
    c = comp[v]
    found = _bfs_path(u, lambda n: n == v,
                      lambda n: ((w, y) for w, y, _ in adj[n] if comp[w] == c))
    return Lasso(tuple(prefix), (x,) + tuple(found[1]))


def _bad_components(adj, comp) -> dict[int, tuple[int, int, int]]:
    """Component id -> one internal flagged edge (v, letter, u)."""
    bad = {}
    for v, row in enumerate(adj):
        for u, x, flag in row:
            if flag and comp[v] == comp[u] and comp[v] >= 0 and comp[v] not in bad:
                bad[comp[v]] = (v, x, u)
    return bad


def _reaches(adj, targets: set[int]) -> set[int]:
    pred = [[] for _ in adj]
    for v, row in enumerate(adj):
        for u, _, _ in row:
            pred[u].append(v)
    seen, queue = set(targets), deque(targets)
    while queue:
        u = queue.popleft()
        for v in pred[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _restricted_scc(adj, keep: Sequence[bool]) -> list[int]:
    """SCC ids of the subgraph on kept nodes; other nodes get -1."""
    sub = [[u for u, _, _ in row if keep[u]] if keep[v] else [] for v, row in enumerate(adj)]
    comp, _ = tarjan_scc(len(adj), sub)
    return [c if keep[v] else -1 for v, c in enumerate(comp)]


# ---------------------------------------------------------------- L(R) ⊆ L(reach(a), s)

@dataclass(frozen=True)
class InclusionReport:
    ok: bool
    failures: dict[int, Lasso]  # state -> lasso in the first language, not in the second
    product_size: int = 0

    def describe(self, a: Automaton) -> str:
        if self.ok:
            return "pass"
        return "; ".join(f"{a.state_names[q]}: {w.render(a.alphabet)}" for q, w in self.failures.items())


def verify_all_states_accept_reference(a: Automaton, ref) -> InclusionReport:
    """Exact check of L(R) ⊆ L(reach(a), s) for every state s.

    reach(a) from s accepts iff some run takes a significant transition, so its complement is
    tracked by the set of states reachable through non-significant steps. A word of L(R) avoiding
    every significant step is an accepting lasso of the product R × subsets.
    """
    if a.alphabet != ref.alphabet:
        raise AutomatonError("alphabet mismatch")
    r = ref.automaton
    m = len(a.alphabet)
    plain = [[0] * m for _ in range(a.state_count)]
    hot = [[False] * m for _ in range(a.state_count)]
    for t in a.transitions:
        if t.significant:
            hot[t.src][t.letter] = True
        else:
            plain[t.src][t.letter] |= 1 << t.dst
    index: dict[tuple[int, int], int] = {}
    keys: list[tuple[int, int]] = []
    adj: list[list[tuple[int, int, bool]]] = []

    def node(key):
        v = index.get(key)
        if v is None:
            v = index[key] = len(keys)
            keys.append(key)
            adj.append([])
            queue.append(v)
        return v

    queue: deque[int] = deque()
    starts = [node((r.initial, 1 << s)) for s in range(a.state_count)]
    while queue:
        v = queue.popleft()
        rq, mask = keys[v]
        for x in range(m):
            post, bits, q = 0, mask, 0
            fired = False
            while bits:
                if bits & 1:
                    if hot[q][x]:
                        fired = True
                        break
                    post |= plain[q][x]
                bits >>= 1
                q += 1
            if fired:
                continue
            for d, sig in r.succ[rq][x]:
                adj[v].append((node((d, post)), x, sig))
    comp, _ = tarjan_scc(len(adj), [[u for u, _, _ in row] for row in adj])
    bad = _bad_components(adj, comp)
    doomed = _reaches(adj, {e[0] for e in bad.values()})
    failures = {}
    for s, v in enumerate(starts):
        if v in doomed:
            target = next(e for c, e in bad.items() if e[0] in _reach_from(adj, v))
            failures[s] = _lasso_in_graph(v, adj, comp, target)
    return InclusionReport(not failures, failures, len(keys))


def _reach_from(adj, v: int) -> set[int]:
    seen, queue = {v}, deque([v])
    while queue:
        w = queue.popleft()
        for u, _, _ in adj[w]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


# ---------------------------------------------------------------- L(a, s) ⊆ L(R), exact

def sigma_star_nfa(f: FiniteAutomaton) -> FiniteAutomaton:
    """NFA for Σ*·L(f): a fresh looping start copying f's initial moves."""
    n, m = f.state_count, len(f.alphabet)
    edges = list(f.transitions())
    edges += [(n, x, n) for x in range(m)]
    edges += [(n, x, d) for q, x, d in f.transitions() if q == f.initial]
    accepting = set(f.accepting) | ({n} if f.initial in f.accepting else set())
    return make_finite(f.alphabet, n + 1, n, edges, accepting)


def is_prefix_free(f: FiniteAutomaton) -> bool:
    """No word of L(f) is a proper prefix of another."""
    d = determinize(f)
    live = set()
    rev = [[] for _ in range(d.state_count)]
    for q, _, t in d.transitions():
        rev[t].append(q)
    queue = deque(d.accepting)
    live = set(d.accepting)
    while queue:
        t = queue.popleft()
        for q in rev[t]:
            if q not in live:
                live.add(q)
                queue.append(q)
    return not any(d.target(q, x) in live for q in d.accepting for x in range(len(d.alphabet)))


def check_upper_bound_exact(a: Automaton, ref) -> InclusionReport:
    """Exact check of L(a, s) ⊆ L(R) for every state s, for R = (Σ*·X·Σ*·y)^ω.

    With X prefix-free, a word is in L(R) iff it has infinitely many X-occurrence ends and
    infinitely many separators. A counterexample is an accepting lasso of a that eventually
    avoids either, found in a × DFA(Σ*X) and in a without separator edges.
    """
    if not is_prefix_free(ref.infix):
        raise AutomatonError("the infix language is not prefix-free; the exact method does not apply")
    d = complete(determinize(sigma_star_nfa(ref.infix)))
    sep = a.alphabet.index(ref.separator)
    failures: dict[int, Lasso] = {}
    # finitely many separators
    plain = [[(t.dst, t.letter, t.significant) for t in a.out_edges[q] if t.letter != sep]
             for q in range(a.state_count)]
    comp, _ = tarjan_scc(a.state_count, [[u for u, _, _ in row] for row in plain])
    bad = _bad_components(plain, comp)
    full = [[(t.dst, t.letter, t.significant) for t in a.out_edges[q]] for q in range(a.state_count)]
    full_comp = [comp[q] for q in range(a.state_count)]
    for s in range(a.state_count):
        reach = _reach_from(full, s)
        hit = next((e for e in bad.values() if e[0] in reach), None)
        if hit is not None:
            v, x, u = hit
            _, prefix = _bfs_path(s, lambda n: n == v, lambda n: ((w, y) for w, y, _ in full[n]))
            _, back = _bfs_path(u, lambda n: n == v,
                                lambda n: ((w, y) for w, y, _ in plain[n] if full_comp[w] == comp[v]))
            failures[s] = Lasso(tuple(prefix), (x,) + tuple(back))
    # finitely many infix occurrences
    index: dict[tuple[int, int], int] = {}
    keys: list[tuple[int, int]] = []
    adj: list[list[tuple[int, int, bool]]] = []
    queue: deque[int] = deque()

    def node(key):
        v = index.get(key)
        if v is None:
            v = index[key] = len(keys)
            keys.append(key)
            adj.append([])
            queue.append(v)
        return v

    starts = [node((s, d.initial)) for s in range(a.state_count)]
    while queue:
        v = queue.popleft()
        q, dq = keys[v]
        for t in a.out_edges[q]:
            adj[v].append((node((t.dst, d.target(dq, t.letter))), t.letter, t.significant))
    keep = [dq not in d.accepting for _, dq in keys]
    comp2 = _restricted_scc(adj, keep)
    bad2 = _bad_components(adj, comp2)
    doomed = _reaches(adj, {e[0] for e in bad2.values()})
    for s, v in enumerate(starts):
        if s in failures or v not in doomed:
            continue
        reach = _reach_from(adj, v)
        target = next(e for e in bad2.values() if e[0] in reach)
        failures[s] = _lasso_in_graph(v, adj, comp2, target)
    return InclusionReport(not failures, failures, len(keys))


# ---------------------------------------------------------------- fact suites

@dataclass(frozen=True)
class PathFact:
    label: str
    src: tuple[str, ...]
    dst: tuple[str, ...]
    forbidden: tuple[str, ...]
    mode: str  # subset | disjoint | empty
    target: dict
    final_significant: bool = False


@dataclass(frozen=True)
class FactSuite:
    name: str
    automaton: str
    classifier: str | None
    assembly: dict  # {"kind": "segments", "delimiters": [...]} or {"kind": "recurrence", "sets": [[...]]}
    facts: tuple[PathFact, ...]


def _expand_names(items, indices) -> list[str]:
    out = []
    for item in items:
        if "{i}" in item:
            out += [substitute(item, {"i": str(i)}) for i in indices]
        else:
            out.append(item)
    return out


def parse_fact_suite(obj: dict) -> FactSuite:
    """Expand a JSON suite: facts with "vars"/"when" become one fact per assignment."""
    try:
        indices = obj.get("indices", [])
        named = {k: _expand_names(v, indices) for k, v in obj.get("sets", {}).items()}

        def names(value, env):
            value = substitute(value, env)
            if isinstance(value, str):
                return tuple(named[value[1:]]) if value.startswith("$") else (value,)
            out = []
            for v in value:
                out += list(names(v, env))
            return tuple(out)

        assembly = dict(obj["assembly"])
        if assembly["kind"] == "segments":
            assembly["delimiters"] = list(names(assembly["delimiters"], {}))
        elif assembly["kind"] == "recurrence":
            assembly["sets"] = [list(names(s, {})) for s in assembly["sets"]]
        else:
            raise AutomatonError(f"unknown assembly kind {assembly['kind']!r}")
        facts = []
        for k, f in enumerate(obj["facts"]):
            envs = list(assignments(f.get("vars", {}), f.get("when"))) or [{}]
            for env in envs:
                tag = ",".join(f"{v}={env[v]}" for v in sorted(env))
                facts.append(PathFact(
                    label=f"{f.get('label', k)}" + (f"[{tag}]" if tag else ""),
                    src=names(f["src"], env), dst=names(f["dst"], env),
                    forbidden=names(f.get("forbidden", []), env),
                    mode=f.get("mode", "subset"),
                    target=substitute(f.get("target", {"empty": True}), env),
                    final_significant=bool(f.get("final_significant", False))))
        return FactSuite(obj.get("name", ""), obj["automaton"], obj.get("classifier"),
                         assembly, tuple(facts))
    except KeyError as e:
        raise AutomatonError(f"malformed fact suite: missing {e.args[0]!r}") from None


def load_fact_suite(source) -> FactSuite:
    """From a dict, a JSON path, or the name of a bundled suite."""
    if isinstance(source, dict):
        return parse_fact_suite(source)
    path = Path(source)
    if not path.exists():
        path = Path(__file__).parent / "data" / f"{source}.json"
    try:
        return parse_fact_suite(json.loads(path.read_text()))
    except (OSError, json.JSONDecodeError) as e:
        raise AutomatonError(f"cannot read fact suite {source}: {e}") from None


def suite_classifier(suite: FactSuite, a: Automaton) -> ClassifierDfa | None:
    if suite.classifier is None:
        return None
    from .references import xy_classifier
    from .zoo import build_classifier
    if suite.classifier == "main":
        return build_classifier()
    if suite.classifier in ("xy", "xy_stray"):
        return xy_classifier(a.alphabet.letters, stray=suite.classifier == "xy_stray")
    raise AutomatonError(f"unknown classifier {suite.classifier!r}")


@dataclass(frozen=True)
class FactOutcome:
    label: str
    ok: bool
    witness: tuple[int, ...] | None


@dataclass(frozen=True)
class FactReport:
    ok: bool
    outcomes: tuple[FactOutcome, ...]
    structural: tuple[str, ...]  # problems with the assembly rule

    def failures(self) -> list[FactOutcome]:
        return [o for o in self.outcomes if not o.ok]


def _segment_nfa(a: Automaton, fact: PathFact) -> FiniteAutomaton:
    forbidden = a.states(fact.forbidden)
    parts = [path_language(a, a.state(s), a.state(d), forbidden,
                           require_final_significant=fact.final_significant, nonempty=True)
             for s in fact.src for d in fact.dst]
    return parts[0] if len(parts) == 1 else union_nfa(parts)


def check_fact(a: Automaton, fact: PathFact, cls: ClassifierDfa | None) -> FactOutcome:
    seg = _segment_nfa(a, fact)
    if fact.mode == "empty":
        ok, witness = nfa_included_in_dfa(seg, determinize(compile_expr({"empty": True}, a.alphabet)))
    else:
        target = determinize(compile_expr(fact.target, a.alphabet, cls))
        if fact.mode == "subset":
            ok, witness = nfa_included_in_dfa(seg, target)
        elif fact.mode == "disjoint":
            ok, witness = nfa_disjoint_from_dfa(seg, target)
        else:
            raise AutomatonError(f"unknown fact mode {fact.mode!r}")
    return FactOutcome(fact.label, ok, witness)


def _cycles_avoiding(a: Automaton, avoid: frozenset[int]) -> list[Transition]:
    """Significant transitions on cycles that never visit avoid."""
    keep = [q not in avoid for q in range(a.state_count)]
    adj = [[(t.dst, t.letter, t.significant) for t in a.out_edges[q]] for q in range(a.state_count)]
    comp = _restricted_scc(adj, keep)
    return [t for t in a.transitions if t.significant and comp[t.src] >= 0 and comp[t.src] == comp[t.dst]]


def check_assembly(a: Automaton, suite: FactSuite) -> list[str]:
    problems = []
    asm = suite.assembly
    if asm["kind"] == "segments":
        delim = a.states(asm["delimiters"])
        for t in _cycles_avoiding(a, delim):
            problems.append(f"accepting cycle avoids the delimiters through {a.describe(t)}")
        covered = {(s, d) for f in suite.facts if set(f.forbidden) == set(asm["delimiters"])
                   and not f.final_significant for s in f.src for d in f.dst}
        for s in sorted(delim):
            for d in sorted(delim):
                key = (a.state_names[s], a.state_names[d])
                if key in covered:
                    continue
                seg = path_language(a, s, d, delim, nonempty=True)
                ok, _ = nfa_included_in_dfa(seg, determinize(compile_expr({"empty": True}, a.alphabet)))
                if not ok:
                    problems.append(f"segment {key[0]} -> {key[1]} is nonempty and has no fact")
    else:
        sets = [frozenset(a.states(s)) for s in asm["sets"]]
        for s in sets:
            for t in _cycles_avoiding(a, s):
                problems.append(f"accepting cycle avoids {sorted(a.state_names[q] for q in s)} "
                                f"through {a.describe(t)}")
                break
        for f in suite.facts:
            for ends in (f.src, f.dst):
                if frozenset(a.states(ends)) not in sets:
                    problems.append(f"fact {f.label}: endpoint set {list(ends)} is not recurrent")
    return problems


def verify_language_upper_bound(a: Automaton, suite: FactSuite) -> FactReport:
    """Every fact exactly, plus the structural assembly rule."""
    try:
        cls = suite_classifier(suite, a)
        outcomes = tuple(check_fact(a, f, cls) for f in suite.facts)
    except LangExprError as e:
        raise AutomatonError(f"malformed suite: {e}") from None
    structural = tuple(check_assembly(a, suite))
    return FactReport(all(o.ok for o in outcomes) and not structural, outcomes, structural)


# ---------------------------------------------------------------- semantic determinism

@dataclass(frozen=True)
class SdReport:
    verdict: str  # "semantically deterministic" | "undecided by this method"
    lower: InclusionReport
    upper: InclusionReport | None
    facts: FactReport | None

    @property
    def ok(self) -> bool:
        return self.verdict == "semantically deterministic"


def check_semantic_determinism(a: Automaton, ref, suite: FactSuite | None = None) -> SdReport:
    """All states recognise L(R) (both inclusions exact); then every pair is equivalent."""
    lower = verify_all_states_accept_reference(a, ref)
    upper = check_upper_bound_exact(a, ref)
    facts = verify_language_upper_bound(a, suite) if suite is not None else None
    ok = lower.ok and upper.ok and (facts is None or facts.ok)
    return SdReport("semantically deterministic" if ok else "undecided by this method", lower, upper, facts)


# ---------------------------------------------------------------- reach-covering, simplified

@dataclass(frozen=True)
class CoveringResult:
    mapping: dict[int, int] | None
    failing: int | None = None
    tried: int = 0


def check_reach_covering(a: Automaton, hints: Mapping[int, int] | None = None) -> CoveringResult:
    """For every non-good p, a good q such that p simulates q in reach(a); hints are tried first."""
    good = good_states(a)
    reach = build_reach(a)
    mapping, tried = {}, 0
    for p in range(a.state_count):
        if p in good:
            continue
        order = ([hints[p]] if hints and p in hints else []) + sorted(good)
        for q in dict.fromkeys(order):
            tried += 1
            if simulates(reach, q, reach, p)[0]:
                mapping[p] = q
                break
        else:
            return CoveringResult(None, p, tried)
    return CoveringResult(mapping, None, tried)


@dataclass(frozen=True)
class SimplifiedCertificate:
    good: frozenset[int]
    covering: dict[int, int]
    sd: SdReport
    normal: bool = True


@dataclass(frozen=True)
class SimplifiedResult:
    certificate: SimplifiedCertificate | None
    diagnosis: str

    @property
    def ok(self) -> bool:
        return self.certificate is not None

    @property
    def verdict(self) -> str:
        return "history-deterministic" if self.ok else "not certified"


def check_simplified(a: Automaton, ref=None, suite: FactSuite | None = None,
                     hints: Mapping[int, int] | None = None) -> SimplifiedResult:
    """Normal + reach-covering + semantically deterministic gives an HD certificate."""
    if a.acceptance != BUCHI:
        return SimplifiedResult(None, "not a Büchi automaton")
    if not is_normal(a):
        return SimplifiedResult(None, "not normal")
    cov = check_reach_covering(a, hints)
    if cov.mapping is None:
        return SimplifiedResult(None, f"reach-covering fails at {a.state_names[cov.failing]}")
    if ref is None:
        return SimplifiedResult(None, "semantic determinism undecided: no reference language")
    sd = check_semantic_determinism(a, ref, suite)
    if not sd.ok:
        parts = []
        if not sd.lower.ok:
            parts.append("reference not accepted from " + sd.lower.describe(a))
        if sd.upper and not sd.upper.ok:
            parts.append("extra words from " + sd.upper.describe(a))
        if sd.facts and not sd.facts.ok:
            parts.append(f"{len(sd.facts.failures())} facts fail, {len(sd.facts.structural)} structural problems")
        return SimplifiedResult(None, "semantic determinism undecided: " + "; ".join(parts))
    cert = SimplifiedCertificate(good_states(a), cov.mapping, sd, True)
    return SimplifiedResult(cert, "simplified")


def zoo_hints(key: str, a: Automaton) -> dict[int, int]:
    from .zoo import ENTRIES
    entry = ENTRIES.get(key)
    return {a.state(p): a.state(q) for p, q in entry.covering.items()} if entry else {}


# ---------------------------------------------------------------- rewirings

@dataclass(frozen=True)
class Rewiring:
    automaton: Automaton
    choice: tuple[tuple[int, int, int], ...]  # (state, letter, new target) in a's numbering


def rewiring_groups(a: Automaton, good: frozenset[int]) -> list[tuple[int, int]]:
    """(good state, letter) pairs whose transitions are significant or leave the good states."""
    out = []
    for p in sorted(good):
        for x in range(len(a.alphabet)):
            cell = a.succ[p][x]
            if any(s or d not in good for d, s in cell):
                out.append((p, x))
    return out


def enumerate_rewirings(a: Automaton, cert: SimplifiedCertificate, mode: str = "all") -> Iterator[Rewiring]:
    """Rewirings of a; every good state counts as a valid target (all states are equivalent).

    mode "all": deterministic automata on the good states, every group redirected at once.
    mode "single": a with one group leaving the good states redirected (others untouched).
    """
    if cert is None:
        raise AutomatonError("enumerate_rewirings needs a simplified certificate")
    good = cert.good
    targets = sorted(good)
    groups = rewiring_groups(a, good)
    if mode == "single":
        for p, x in groups:
            if all(d in good for d, _ in a.succ[p][x]):
                continue
            t = next(t for t in a.out_edges[p] if t.letter == x)
            for q in targets:
                yield Rewiring(redirect_transition(a, t, q, True, exclusive=True), ((p, x, q),))
        return
    if mode != "all":
        raise AutomatonError(f"unknown rewiring mode {mode!r}")
    keep = [q for q in range(a.state_count) if q in good]
    new_of = {q: i for i, q in enumerate(keep)}
    base = [Transition(new_of[t.src], t.letter, new_of[t.dst], False)
            for t in a.transitions if t.src in good and not t.significant and (t.src, t.letter) not in groups]
    start = a.initial if a.initial in good else cert.covering[a.initial]
    names = tuple(a.state_names[q] for q in keep)
    for combo in itertools.product(targets, repeat=len(groups)):
        trans = base + [Transition(new_of[p], x, new_of[q], True) for (p, x), q in zip(groups, combo)]
        b = Automaton(f"{a.name}-rewiring", a.alphabet, names, new_of[start], tuple(trans), BUCHI)
        yield Rewiring(b, tuple((p, x, q) for (p, x), q in zip(groups, combo)))


def count_rewirings(a: Automaton, cert: SimplifiedCertificate) -> int:
    return len(cert.good) ** len(rewiring_groups(a, cert.good))


@dataclass(frozen=True)
class Refutation:
    witness: Lasso | None
    source: str  # "supplied", "search" or "none"
    checked: int = 0

    @property
    def refuted(self) -> bool:
        return self.witness is not None


def access_words(b: Automaton) -> list[tuple[int, ...]]:
    """Shortest words reaching each reachable state (BFS order, letters in alphabet order)."""
    seen = {b.initial: ()}
    queue = deque([b.initial])
    while queue:
        q = queue.popleft()
        for t in b.out_edges[q]:
            if t.dst not in seen:
                seen[t.dst] = seen[q] + (t.letter,)
                queue.append(t.dst)
    return sorted(seen.values(), key=lambda w: (len(w), w))


def _return_distances(b: Automaton, q0: int) -> tuple[list[float], list[float]]:
    """Shortest q -> q0 distances: any path, and paths with a significant edge."""
    inf = float("inf")
    plain, sig = [inf] * b.state_count, [inf] * b.state_count
    plain[q0] = 0
    queue = deque([(q0, False)])
    pred = [[] for _ in range(b.state_count)]
    for t in b.transitions:
        pred[t.dst].append(t)
    while queue:
        q, has = queue.popleft()
        d = sig[q] if has else plain[q]
        for t in pred[q]:
            p, h = t.src, has or t.significant
            table = sig if h else plain
            if table[p] == inf:
                table[p] = d + 1
                queue.append((p, h))
    return [min(x, y) for x, y in zip(plain, sig)], sig


def cycle_lassos(b: Automaton, bound: int) -> Iterator[Lasso]:
    """Lassos u.v^omega with u an access word and v a significant cycle, |u|+|v| <= bound."""
    reach = access_words(b)
    for u in reach:
        q0 = b.initial
        for x in u:
            q0 = b.succ[q0][x][0][0]
        budget = bound - len(u)
        plain, sig_dist = _return_distances(b, q0)
        stack = [(q0, (), False)]
        while stack:
            q, v, sig = stack.pop()
            if v and q == q0 and sig:
                yield Lasso(u, v)
            left = budget - len(v)
            for t in reversed(b.out_edges[q]):
                s2 = sig or t.significant
                if 1 + (plain[t.dst] if s2 else sig_dist[t.dst]) <= left:
                    stack.append((t.dst, v + (t.letter,), s2))


def refute_rewiring(b: Automaton, ref, witnesses: Sequence[Lasso] = (), bound: int = 12,
                    max_lassos: int = 50_000) -> Refutation:
    """A lasso accepted by b and outside L(R): supplied periods first (with access prefixes), then search."""
    checked = 0
    prefixes = access_words(b)
    for w in witnesses:
        for u in ([w.prefix] + [p + w.prefix for p in prefixes]):
            lasso = Lasso(u, w.period)
            checked += 1
            if lasso_accepts(b, lasso) and not ref.member(lasso):
                return Refutation(lasso, "supplied", checked)
    if not is_deterministic(b):
        return Refutation(None, "none", checked)
    for lasso in cycle_lassos(b, bound):
        if checked >= max_lassos:
            break
        checked += 1
        if not ref.member(lasso):
            return Refutation(lasso, "search", checked)
    return Refutation(None, "none", checked)


def refute_rewiring_exact(b: Automaton, ref, witnesses: Sequence[Lasso] = ()) -> Refutation:
    """Supplied periods first, then the exact upper-bound check (any branching).

    A failure at a reachable state q is moved to the initial state with an access word for q.
    """
    first = refute_rewiring(b, ref, witnesses, max_lassos=0)
    if first.refuted:
        return first
    failures = check_upper_bound_exact(b, ref).failures
    for u in access_words(b):
        states = {b.initial}
        for x in u:
            states = {d for q in states for d, _ in b.succ[q][x]}
        for q in sorted(states & failures.keys()):
            w = failures[q]
            lasso = Lasso(u + w.prefix, w.period).canonical()
            if lasso_accepts(b, lasso) and not ref.member(lasso):
                return Refutation(lasso, "exact", first.checked + 1)
    return Refutation(None, "none", first.checked)
