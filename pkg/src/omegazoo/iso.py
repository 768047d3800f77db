"""Isomorphism of edge-labelled rooted graphs (automata, 3-DFAs) by colour refinement and search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence


@dataclass(frozen=True)
class LabelledGraph:
    """Nodes 0..n-1 with a label each, labelled edges and a root."""
    node_labels: tuple[Hashable, ...]
    edges: tuple[tuple[int, Hashable, int], ...]
    root: int

    @property
    def size(self) -> int:
        return len(self.node_labels)


def _refine(graphs: Sequence[LabelledGraph], colours: list[list[int]]) -> list[list[int]]:
    """Joint colour refinement until stable; colours are comparable across graphs."""
    outs = []
    ins = []
    for g in graphs:
        o = [[] for _ in range(g.size)]
        i = [[] for _ in range(g.size)]
        for s, lab, d in g.edges:
            o[s].append((repr(lab), d))
            i[d].append((repr(lab), s))
        outs.append(o)
        ins.append(i)
    while True:
        sigs = []
        for gi, g in enumerate(graphs):
            col = colours[gi]
            sigs.append([
                (col[v],
                 tuple(sorted((lab, col[d]) for lab, d in outs[gi][v])),
                 tuple(sorted((lab, col[s]) for lab, s in ins[gi][v])))
                for v in range(g.size)])
        palette = {s: k for k, s in enumerate(sorted({s for row in sigs for s in row}))}
        new = [[palette[s] for s in row] for row in sigs]
        if len(palette) == len({c for row in colours for c in row}):
            return new
        colours = new


def _initial_colours(a: LabelledGraph, b: LabelledGraph) -> list[list[int]]:
    keys = sorted({repr((lab, v == g.root)) for g in (a, b) for v, lab in enumerate(g.node_labels)})
    index = {k: i for i, k in enumerate(keys)}
    return [[index[repr((lab, v == g.root))] for v, lab in enumerate(g.node_labels)] for g in (a, b)]


def graph_isomorphism(a: LabelledGraph, b: LabelledGraph) -> dict[int, int] | None:
    """A label-, edge- and root-preserving bijection from a's nodes to b's, or None."""
    if a.size != b.size or len(a.edges) != len(b.edges):
        return None
    edges_b = set(b.edges)
    if len(edges_b) != len(b.edges) or len(set(a.edges)) != len(a.edges):
        return None

    def search(colours):
        colours = _refine((a, b), colours)
        ca, cb = colours
        if sorted(ca) != sorted(cb):
            return None
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(ca):
            classes.setdefault(c, []).append(v)
        open_classes = [vs for vs in classes.values() if len(vs) > 1]
        if not open_classes:
            where = {c: w for w, c in enumerate(cb)}
            mapping = {v: where[c] for v, c in enumerate(ca)}
            if all((mapping[s], lab, mapping[d]) in edges_b for s, lab, d in a.edges):
                return mapping
            return None
        target = min(open_classes, key=len)
        v = target[0]
        fresh = max(max(ca), max(cb)) + 1
        for w in [u for u, c in enumerate(cb) if c == ca[v]]:
            na, nb = list(ca), list(cb)
            na[v] = fresh
            nb[w] = fresh
            found = search([na, nb])
            if found is not None:
                return found
        return None

    return search(_initial_colours(a, b))


def automaton_graph(a) -> LabelledGraph:
    edges = tuple((t.src, (a.alphabet.letters[t.letter], t.significant), t.dst) for t in a.transitions)
    return LabelledGraph(tuple(a.acceptance for _ in range(a.state_count)), edges, a.initial)


def isomorphic(a, b) -> tuple[bool, dict[int, int] | None]:
    """Isomorphism of two automata (or 3-DFAs); the bijection maps a's states to b's."""
    if tuple(a.alphabet.letters) != tuple(b.alphabet.letters):
        return False, None
    ga = a.as_graph() if hasattr(a, "as_graph") else automaton_graph(a)
    gb = b.as_graph() if hasattr(b, "as_graph") else automaton_graph(b)
    mapping = graph_isomorphism(ga, gb)
    return mapping is not None, mapping
