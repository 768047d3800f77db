"""Derived ω-automaton constructions: reach, normal form, good states, lasso membership, emptiness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .automaton import (BUCHI, COBUCHI, Automaton, AutomatonError, Lasso, Transition)
from .graph import tarjan_scc

SINK_NAME = "sink"


def _require(a: Automaton, acceptance: str, op: str):
    if a.acceptance != acceptance:
        raise AutomatonError(f"{op} needs a {acceptance} automaton, got {a.acceptance} ({a.name})")


def build_reach(a: Automaton) -> Automaton:
    """Redirect every significant transition to a fresh sink with significant self-loops."""
    _require(a, BUCHI, "build_reach")
    n = a.state_count
    out, seen = [], set()
    for t in a.transitions:
        nt = Transition(t.src, t.letter, n, True) if t.significant else t
        if nt not in seen:
            seen.add(nt)
            out.append(nt)
    out.extend(Transition(n, x, n, True) for x in range(len(a.alphabet)))
    name = SINK_NAME
    while name in a.state_names:
        name += "'"
    return Automaton(f"reach({a.name})", a.alphabet, a.state_names + (name,), a.initial,
                     tuple(out), BUCHI)


@dataclass(frozen=True)
class SccDecomposition:
    comp: tuple[int, ...]
    components: tuple[frozenset[int], ...]
    nontrivial: tuple[bool, ...]
    dag_edges: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.components)

    def nontrivial_components(self) -> list[frozenset[int]]:
        return [c for c, nt in zip(self.components, self.nontrivial) if nt]


def scc_decomposition(a: Automaton, keep: Callable[[Transition], bool] = lambda t: True) -> SccDecomposition:
    """SCCs of the subgraph of transitions satisfying keep, numbered in topological order."""
    n = a.state_count
    adj = [[] for _ in range(n)]
    loops = [False] * n
    kept = [t for t in a.transitions if keep(t)]
    for t in kept:
        adj[t.src].append(t.dst)
        if t.src == t.dst:
            loops[t.src] = True
    raw, count = tarjan_scc(n, adj)
    comp = tuple(count - 1 - c for c in raw)
    members: list[set[int]] = [set() for _ in range(count)]
    for q, c in enumerate(comp):
        members[c].add(q)
    nontrivial = tuple(len(m) > 1 or loops[next(iter(m))] for m in members)
    dag = sorted({(comp[t.src], comp[t.dst]) for t in kept if comp[t.src] != comp[t.dst]})
    return SccDecomposition(comp, tuple(frozenset(m) for m in members), nontrivial, tuple(dag))


def _dedupe(transitions: Iterable[Transition]) -> tuple[Transition, ...]:
    seen, out = set(), []
    for t in transitions:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


def normalize(a: Automaton) -> Automaton:
    """Make significant every non-significant transition that changes non-significant SCC."""
    comp = scc_decomposition(a, lambda t: not t.significant).comp
    changed = False
    out = []
    for t in a.transitions:
        if not t.significant and comp[t.src] != comp[t.dst]:
            t = t._replace(significant=True)
            changed = True
        out.append(t)
    return a.with_transitions(_dedupe(out)) if changed else a


def is_normal(a: Automaton) -> bool:
    return normalize(a) is a


def good_states(a: Automaton) -> frozenset[int]:
    """States whose accessible part of reach(a) is deterministic."""
    _require(a, BUCHI, "good_states")
    n = a.state_count
    bad = set()
    for q in range(n):
        for cell in a.succ[q]:
            targets = {d if not sig else -1 for d, sig in cell}
            if len(targets) > 1:
                bad.add(q)
                break
    pred = [[] for _ in range(n)]
    for t in a.transitions:
        if not t.significant:
            pred[t.dst].append(t.src)
    tainted = set(bad)
    queue = deque(bad)
    while queue:
        q = queue.popleft()
        for p in pred[q]:
            if p not in tainted:
                tainted.add(p)
                queue.append(p)
    return frozenset(q for q in range(n) if q not in tainted)


def _check_lasso(a: Automaton, w: Lasso):
    m = len(a.alphabet)
    for x in w.prefix + w.period:
        if not 0 <= x < m:
            raise AutomatonError(f"lasso letter {x} outside alphabet of {a.name}")


def _post_masks(a: Automaton) -> tuple[tuple[int, ...], ...]:
    """post[q][x] = bitmask of x-successors of q (any significance)."""
    return a.post_masks


def _image(mask: int, letter: int, post) -> int:
    res = 0
    while mask:
        low = mask & -mask
        res |= post[low.bit_length() - 1][letter]
        mask ^= low
    return res


def lasso_positions(w: Lasso) -> tuple[list[int], list[int]]:
    """Letters and successor positions of the lasso graph."""
    word = list(w.prefix + w.period)
    size = len(word)
    nxt = [i + 1 if i + 1 < size else len(w.prefix) for i in range(size)]
    return word, nxt


def reachable_masks(a: Automaton, w: Lasso, start: int | None = None, post=None) -> list[int]:
    """For each lasso position, the set (bitmask) of states some run reaches there."""
    word, nxt = lasso_positions(w)
    post = post or _post_masks(a)
    masks = [0] * len(word)
    masks[0] = 1 << (a.initial if start is None else start)
    queue = deque([0])
    queued = {0}
    while queue:
        i = queue.popleft()
        queued.discard(i)
        img = _image(masks[i], word[i], post)
        j = nxt[i]
        if img & ~masks[j]:
            masks[j] |= img
            if j not in queued:
                queued.add(j)
                queue.append(j)
    return masks


def lasso_accepts(a: Automaton, w: Lasso, start: int | None = None) -> bool:
    """Exact membership of u.v^omega via the product with the lasso graph."""
    _check_lasso(a, w)
    w = w.canonical()
    word, nxt = lasso_positions(w)
    size = len(word)
    masks = reachable_masks(a, w, start)
    node_of: dict[tuple[int, int], int] = {}
    for i, mask in enumerate(masks):
        q = 0
        while mask:
            if mask & 1:
                node_of[(q, i)] = len(node_of)
            mask >>= 1
            q += 1
    buchi = a.is_buchi
    succ = a.succ if buchi else a.safe_succ
    adj = [[] for _ in node_of]
    sig_edges = []
    for (q, i), v in node_of.items():
        j = nxt[i]
        for d, sig in succ[q][word[i]]:
            u = node_of[(d, j)]
            adj[v].append(u)
            if sig:
                sig_edges.append((v, u))
    comp, _ = tarjan_scc(len(adj), adj)
    if buchi:
        return any(comp[v] == comp[u] for v, u in sig_edges)
    sizes: dict[int, int] = {}
    for c in comp:
        sizes[c] = sizes.get(c, 0) + 1
    return any(sizes[comp[v]] > 1 or v in adj[v] for v in range(len(adj)))


def _bfs_path(start, goal_test, succ):
    """Shortest path from start; succ yields (node, label). Returns (node, labels) or None."""
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if goal_test(v):
            labels = []
            node = v
            while parent[node] is not None:
                node, label = parent[node]
                labels.append(label)
            labels.reverse()
            return v, labels
        for u, label in succ(v):
            if u not in parent:
                parent[u] = (v, label)
                queue.append(u)
    return None


@dataclass(frozen=True)
class EmptinessResult:
    empty: bool
    witness: Lasso | None = None


def buchi_cobuchi_intersection_empty(a: Automaton, c: Automaton) -> EmptinessResult:
    """Decide L(a) ∩ L(c) = ∅ for Büchi a and coBüchi c (one Rabin pair)."""
    _require(a, BUCHI, "intersection (left)")
    _require(c, COBUCHI, "intersection (right)")
    if a.alphabet != c.alphabet:
        raise AutomatonError("alphabet mismatch")
    m = len(a.alphabet)
    post_c = _post_masks(c)
    reach = [0] * a.state_count
    reach[a.initial] = 1 << c.initial
    queue = deque([a.initial])
    while queue:
        qa = queue.popleft()
        for x in range(m):
            img = _image(reach[qa], x, post_c)
            if not img:
                continue
            for d, _ in a.succ[qa][x]:
                if img & ~reach[d]:
                    reach[d] |= img
                    queue.append(d)
    nodes: dict[tuple[int, int], int] = {}
    for qa, mask in enumerate(reach):
        qc = 0
        while mask:
            if mask & 1:
                nodes[(qa, qc)] = len(nodes)
            mask >>= 1
            qc += 1
    keys = list(nodes)
    adj = [[] for _ in keys]
    labelled = [[] for _ in keys]
    for (qa, qc), v in nodes.items():
        for x in range(m):
            safe = [d for d, sig in c.succ[qc][x] if not sig]
            if not safe:
                continue
            for da, siga in a.succ[qa][x]:
                for dc in safe:
                    u = nodes[(da, dc)]
                    adj[v].append(u)
                    labelled[v].append((u, x, siga))
    comp, _ = tarjan_scc(len(keys), adj)
    for v in range(len(keys)):
        for u, x, siga in labelled[v]:
            if siga and comp[u] == comp[v]:
                return EmptinessResult(False, _intersection_witness(a, c, keys, nodes, labelled, comp, v, u, x))
    return EmptinessResult(True)


def _intersection_witness(a, c, keys, nodes, labelled, comp, v, u, x) -> Lasso:
    m = len(a.alphabet)

    def succ_all(node):
        qa, qc = node
        for y in range(m):
            for da, _ in a.succ[qa][y]:
                for dc, _ in c.succ[qc][y]:
                    yield (da, dc), y

    found = _bfs_path((a.initial, c.initial), lambda nd: nd == keys[v], succ_all)
    assert found is not None
    prefix = found[1]
    target = comp[v]

    def succ_in(node):
        i = nodes[node]
        for w, y, _ in labelled[i]:
            if comp[w] == target:
                yield keys[w], y

    back = _bfs_path(keys[u], lambda nd: nd == keys[v], succ_in)
    assert back is not None
    return Lasso(tuple(prefix), (x,) + tuple(back[1])).canonical()


def redirect_transition(a: Automaton, t: Transition, new_dst: int, new_significant: bool,
                        exclusive: bool = False) -> Automaton:
    """Replace t by (t.src, t.letter, new_dst); with exclusive, drop the other transitions on (src, letter)."""
    if t not in a.transitions:
        raise AutomatonError(f"transition {t} not in {a.name}")
    if not 0 <= new_dst < a.state_count:
        raise AutomatonError(f"state {new_dst} out of range")
    new = Transition(t.src, t.letter, new_dst, bool(new_significant))
    out = []
    for s in a.transitions:
        if s == t:
            out.append(new)
        elif exclusive and s.src == t.src and s.letter == t.letter:
            continue
        else:
            out.append(s)
    return a.with_transitions(_dedupe(out))
