"""Finite-word automata: subset construction, Hopcroft minimisation, inclusion, path languages."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import BUCHI, COBUCHI, Alphabet, Automaton, AutomatonError, Transition
from .graph import reachable, tarjan_scc


@dataclass(frozen=True)
class FiniteAutomaton:
    """NFA/DFA over finite words; delta[q][x] is a sorted tuple of successors."""
    alphabet: Alphabet
    delta: tuple[tuple[tuple[int, ...], ...], ...]
    initial: int
    accepting: frozenset[int]
    state_names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.delta)
        if not 0 <= self.initial < n:
            raise AutomatonError("initial state out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise AutomatonError("accepting state out of range")

    @property
    def state_count(self) -> int:
        return len(self.delta)

    @property
    def deterministic(self) -> bool:
        return all(len(cell) <= 1 for row in self.delta for cell in row)

    @property
    def complete(self) -> bool:
        return all(cell for row in self.delta for cell in row)

    def name_of(self, q: int) -> str:
        return self.state_names[q] if self.state_names else str(q)

    def step(self, states: Iterable[int], x: int) -> frozenset[int]:
        return frozenset(d for q in states for d in self.delta[q][x])

    def run(self, word: Sequence[int], start: int | None = None) -> frozenset[int]:
        cur = frozenset([self.initial if start is None else start])
        for x in word:
            cur = self.step(cur, x)
            if not cur:
                break
        return cur

    def accepts(self, word: Sequence[int], start: int | None = None) -> bool:
        return bool(self.run(word, start) & self.accepting)

    def target(self, q: int, x: int) -> int | None:
        """Successor in a deterministic automaton, None if undefined."""
        cell = self.delta[q][x]
        return cell[0] if cell else None

    def transitions(self) -> list[tuple[int, int, int]]:
        return [(q, x, d) for q, row in enumerate(self.delta) for x, cell in enumerate(row) for d in cell]


def make_finite(alphabet: Alphabet | Sequence[str], n: int, initial: int,
                edges: Iterable[tuple[int, int, int]], accepting: Iterable[int],
                state_names: Sequence[str] | None = None) -> FiniteAutomaton:
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    cells = [[set() for _ in alphabet.letters] for _ in range(n)]
    for q, x, d in edges:
        cells[q][x].add(d)
    delta = tuple(tuple(tuple(sorted(c)) for c in row) for row in cells)
    return FiniteAutomaton(alphabet, delta, initial, frozenset(accepting),
                           tuple(state_names) if state_names else None)


def with_start(f: FiniteAutomaton, q: int) -> FiniteAutomaton:
    return FiniteAutomaton(f.alphabet, f.delta, q, f.accepting, f.state_names)


def trim_finite(f: FiniteAutomaton) -> FiniteAutomaton:
    """Keep only states reachable from the initial state."""
    keep = sorted(reachable([f.initial], lambda q: (d for cell in f.delta[q] for d in cell)))
    if len(keep) == f.state_count:
        return f
    remap = {q: i for i, q in enumerate(keep)}
    delta = tuple(tuple(tuple(remap[d] for d in cell) for cell in f.delta[q]) for q in keep)
    names = tuple(f.state_names[q] for q in keep) if f.state_names else None
    return FiniteAutomaton(f.alphabet, delta, remap[f.initial],
                           frozenset(remap[q] for q in f.accepting if q in remap), names)


def determinize(n: FiniteAutomaton, keep_subsets: bool = False):
    """Subset construction; the result is complete, with the empty set as reject sink.

    With keep_subsets, returns (dfa, subsets) where subsets[i] is the NFA state set of DFA state i.
    """
    m = len(n.alphabet)
    start = frozenset([n.initial])
    index = {start: 0}
    subsets = [start]
    rows: list[list[tuple[int, ...]]] = []
    i = 0
    while i < len(subsets):
        cur = subsets[i]
        row = []
        for x in range(m):
            nxt = n.step(cur, x)
            if nxt not in index:
                index[nxt] = len(subsets)
                subsets.append(nxt)
            row.append((index[nxt],))
        rows.append(row)
        i += 1
    accepting = frozenset(i for i, s in enumerate(subsets) if s & n.accepting)
    names = tuple("{" + ",".join(n.name_of(q) for q in sorted(s)) + "}" for s in subsets)
    dfa = FiniteAutomaton(n.alphabet, tuple(tuple(r) for r in rows), 0, accepting, names)
    return (dfa, subsets) if keep_subsets else dfa


def complete(d: FiniteAutomaton) -> FiniteAutomaton:
    """Add an explicit rejecting sink if some transition is missing."""
    if not d.deterministic:
        raise AutomatonError("complete() needs a deterministic automaton")
    if d.complete:
        return d
    n, m = d.state_count, len(d.alphabet)
    delta = [tuple(cell if cell else (n,) for cell in row) for row in d.delta]
    delta.append(tuple((n,) for _ in range(m)))
    names = d.state_names + ("sink",) if d.state_names else None
    return FiniteAutomaton(d.alphabet, tuple(delta), d.initial, d.accepting, names)


def _as_complete_dfa(d: FiniteAutomaton) -> FiniteAutomaton:
    return complete(d) if d.deterministic else determinize(d)


def minimize_dfa(d: FiniteAutomaton) -> FiniteAutomaton:
    """Hopcroft minimisation of the reachable part; output is complete."""
    d = trim_finite(_as_complete_dfa(d))
    n, m = d.state_count, len(d.alphabet)
    inv = [[[] for _ in range(n)] for _ in range(m)]
    for q in range(n):
        for x in range(m):
            inv[x][d.delta[q][x][0]].append(q)
    acc = set(d.accepting)
    rej = set(range(n)) - acc
    partition = [s for s in (acc, rej) if s]
    block_of = [0] * n
    for i, blk in enumerate(partition):
        for q in blk:
            block_of[q] = i
    work = deque()
    if len(partition) == 2:
        smaller = 0 if len(partition[0]) <= len(partition[1]) else 1
        work.extend((smaller, x) for x in range(m))
    while work:
        b, x = work.popleft()
        splitter = {p for q in partition[b] for p in inv[x][q]}
        touched: dict[int, set[int]] = {}
        for p in splitter:
            touched.setdefault(block_of[p], set()).add(p)
        for bi, inside in touched.items():
            blk = partition[bi]
            if len(inside) == len(blk):
                continue
            outside = blk - inside
            partition[bi] = inside
            partition.append(outside)
            ni = len(partition) - 1
            for q in outside:
                block_of[q] = ni
            for y in range(m):
                if (bi, y) in work:
                    work.append((ni, y))
                else:
                    work.append((bi, y) if len(inside) <= len(outside) else (ni, y))
    # renumber blocks in BFS order from the initial state for a canonical layout
    order = {block_of[d.initial]: 0}
    queue = deque([block_of[d.initial]])
    rep = {}
    for q in range(n):
        rep.setdefault(block_of[q], q)
    while queue:
        b = queue.popleft()
        for x in range(m):
            nb = block_of[d.delta[rep[b]][x][0]]
            if nb not in order:
                order[nb] = len(order)
                queue.append(nb)
    delta = [None] * len(order)
    for b, i in order.items():
        delta[i] = tuple((order[block_of[d.delta[rep[b]][x][0]]],) for x in range(m))
    accepting = frozenset(order[b] for b in order if rep[b] in acc)
    return FiniteAutomaton(d.alphabet, tuple(delta), 0, accepting)


def _product_search(d1: FiniteAutomaton, d2: FiniteAutomaton, bad) -> tuple[int, ...] | None:
    """Shortest word (ties by letter order) reaching a product pair satisfying bad."""
    if d1.alphabet != d2.alphabet:
        raise AutomatonError("alphabet mismatch")
    m = len(d1.alphabet)
    start = (d1.initial, d2.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        if bad(*pair):
            word = []
            while parent[pair] is not None:
                pair, x = parent[pair]
                word.append(x)
            return tuple(reversed(word))
        p, q = pair
        for x in range(m):
            for np_ in d1.delta[p][x]:
                for nq in d2.delta[q][x]:
                    nxt = (np_, nq)
                    if nxt not in parent:
                        parent[nxt] = (pair, x)
                        queue.append(nxt)
    return None


def dfa_included(d1: FiniteAutomaton, d2: FiniteAutomaton) -> tuple[bool, tuple[int, ...] | None]:
    """L(d1) ⊆ L(d2), with a shortest word of L(d1) ∖ L(d2) on failure."""
    a, b = _as_complete_dfa(d1), _as_complete_dfa(d2)
    w = _product_search(a, b, lambda p, q: p in a.accepting and q not in b.accepting)
    return w is None, w


def dfa_equivalent(d1: FiniteAutomaton, d2: FiniteAutomaton) -> tuple[bool, tuple[int, ...] | None]:
    a, b = _as_complete_dfa(d1), _as_complete_dfa(d2)
    w = _product_search(a, b, lambda p, q: (p in a.accepting) != (q in b.accepting))
    return w is None, w


def nfa_included_in_dfa(n: FiniteAutomaton, d: FiniteAutomaton) -> tuple[bool, tuple[int, ...] | None]:
    """L(n) ⊆ L(d) for deterministic d, with a shortest counterexample on failure."""
    if not d.deterministic:
        raise AutomatonError("right-hand side must be deterministic")
    d = complete(d)
    w = _product_search(n, d, lambda p, q: p in n.accepting and q not in d.accepting)
    return w is None, w


def nfa_disjoint_from_dfa(n: FiniteAutomaton, d: FiniteAutomaton) -> tuple[bool, tuple[int, ...] | None]:
    if not d.deterministic:
        raise AutomatonError("right-hand side must be deterministic")
    d = complete(d)
    w = _product_search(n, d, lambda p, q: p in n.accepting and q in d.accepting)
    return w is None, w


def complement_dfa(d: FiniteAutomaton) -> FiniteAutomaton:
    d = _as_complete_dfa(d)
    return FiniteAutomaton(d.alphabet, d.delta, d.initial,
                           frozenset(range(d.state_count)) - d.accepting, d.state_names)


def union_nfa(parts: Sequence[FiniteAutomaton]) -> FiniteAutomaton:
    """Union via a fresh initial state copying the initial transitions of each part."""
    if not parts:
        raise AutomatonError("union of nothing")
    alphabet = parts[0].alphabet
    m = len(alphabet)
    edges, accepting = [], set()
    offset = 1
    for f in parts:
        if f.alphabet != alphabet:
            raise AutomatonError("alphabet mismatch")
        for q, x, d in f.transitions():
            edges.append((q + offset, x, d + offset))
            if q == f.initial:
                edges.append((0, x, d + offset))
        accepting.update(q + offset for q in f.accepting)
        if f.initial in f.accepting:
            accepting.add(0)
        offset += f.state_count
    return make_finite(alphabet, offset, 0, edges, accepting)


def path_language(a: Automaton, src: int, dst: int, forbidden: Iterable[int] = (),
                  only_nonsignificant: bool = False, require_final_significant: bool = False,
                  nonempty: bool = False) -> FiniteAutomaton:
    """NFA of labels of paths src -> dst whose intermediate states avoid forbidden.

    State 0 stands for src at the start and the last state for dst at the end; the
    copies in between are the states of a that may be visited as intermediates.
    """
    forbidden = set(forbidden)
    n = a.state_count
    final = n + 1
    edges = []

    def allowed_edge(t: Transition, last: bool) -> bool:
        if require_final_significant and last:
            return t.significant
        return not (only_nonsignificant and t.significant)

    def emit(node: int, t: Transition):
        if t.dst == dst and allowed_edge(t, True):
            edges.append((node, t.letter, final))
        if t.dst not in forbidden and allowed_edge(t, False):
            edges.append((node, t.letter, t.dst + 1))

    for t in a.out_edges[src]:
        emit(0, t)
    for q in range(n):
        if q in forbidden:
            continue
        for t in a.out_edges[q]:
            emit(q + 1, t)
    accepting = {final}
    if src == dst and not nonempty and not require_final_significant:
        accepting.add(0)
    names = ["start"] + list(a.state_names) + ["end"]
    return make_finite(a.alphabet, n + 2, 0, edges, accepting, names)


def build_safe(a: Automaton, start: int | None = None) -> FiniteAutomaton:
    """The non-significant part of a coBüchi automaton as an all-accepting NFA."""
    if a.acceptance != COBUCHI:
        raise AutomatonError("build_safe needs a coBüchi automaton")
    edges = [(t.src, t.letter, t.dst) for t in a.transitions if not t.significant]
    return make_finite(a.alphabet, a.state_count, a.initial if start is None else start,
                       edges, range(a.state_count), a.state_names)


def prefix_closure_dfa(f: FiniteAutomaton) -> FiniteAutomaton:
    """DFA for the finite prefixes of the infinite words a safety DFA admits.

    States that cannot continue forever are dropped; the result is complete and minimal.
    """
    live = set(range(f.state_count))
    while True:
        dead = {q for q in live if not any(d in live for cell in f.delta[q] for d in cell)}
        if not dead:
            break
        live -= dead
    if f.initial not in live:
        n = make_finite(f.alphabet, 1, 0, [], [])
        return minimize_dfa(n)
    edges = [(q, x, d) for q, x, d in f.transitions() if q in live and d in live]
    return minimize_dfa(make_finite(f.alphabet, f.state_count, f.initial, edges, live))


def live_state_count(d: FiniteAutomaton) -> int:
    """States of a complete DFA from which an accepting state is reachable."""
    rev = [[] for _ in range(d.state_count)]
    for q, _, t in d.transitions():
        rev[t].append(q)
    return len(reachable(d.accepting, rev.__getitem__))


def restrict_alphabet(x, letters: Iterable[str]):
    """Drop transitions on letters outside the given subset and trim."""
    keep = set(letters)
    if not keep:
        raise AutomatonError("restriction to an empty alphabet")
    missing = keep - set(x.alphabet.letters)
    if missing:
        raise AutomatonError(f"letters {sorted(missing)} not in alphabet")
    sub = Alphabet(tuple(l for l in x.alphabet.letters if l in keep))
    old_index = [x.alphabet.index(l) for l in sub.letters]
    if isinstance(x, Automaton):
        from .automaton import trim
        new_of = {o: i for i, o in enumerate(old_index)}
        trans = tuple(Transition(t.src, new_of[t.letter], t.dst, t.significant)
                      for t in x.transitions if t.letter in new_of)
        return trim(Automaton(x.name, sub, x.state_names, x.initial, trans, x.acceptance))
    delta = tuple(tuple(row[o] for o in old_index) for row in x.delta)
    return trim_finite(FiniteAutomaton(sub, delta, x.initial, x.accepting, x.state_names))


def nonempty_cycle_states(f: FiniteAutomaton) -> set[int]:
    """States lying on some cycle."""
    adj = [[d for cell in row for d in cell] for row in f.delta]
    comp, count = tarjan_scc(f.state_count, adj)
    sizes = [0] * count
    for c in comp:
        sizes[c] += 1
    return {q for q in range(f.state_count) if sizes[comp[q]] > 1 or q in adj[q]}


@dataclass(frozen=True)
class ClassifierDfa:
    """Deterministic automaton with labelled final states; runs classify words by end state."""
    dfa: FiniteAutomaton
    finals: dict

    def __post_init__(self):
        if not self.dfa.deterministic:
            raise AutomatonError("classifier must be deterministic")
        if len(set(self.finals.values())) != len(self.finals):
            raise AutomatonError("final labels must be distinct")

    def language(self, label) -> FiniteAutomaton:
        state = next(q for q, v in self.finals.items() if v == label)
        d = self.dfa
        return FiniteAutomaton(d.alphabet, d.delta, d.initial, frozenset([state]), d.state_names)


def classify(c: ClassifierDfa, word: Sequence[int]):
    """Label of the final state the run ends in, or None."""
    q = c.dfa.initial
    for x in word:
        q = c.dfa.target(q, x)
        if q is None:
            return None
    return c.finals.get(q)


def buchi_as_nfa(a: Automaton) -> FiniteAutomaton:
    """Transition structure of an ω-automaton as an all-accepting NFA."""
    if a.acceptance not in (BUCHI, COBUCHI):
        raise AutomatonError("unknown acceptance")
    return make_finite(a.alphabet, a.state_count, a.initial,
                       [(t.src, t.letter, t.dst) for t in a.transitions],
                       range(a.state_count), a.state_names)
