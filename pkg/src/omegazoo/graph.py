"""Small graph utilities shared by the automaton and game code."""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Sequence


def tarjan_scc(n: int, succ: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Strongly connected components of a graph on nodes 0..n-1.

    Returns (comp, count) where comp[v] is the component index of v.
    Components are numbered in reverse topological order: an edge u -> v
    between different components always satisfies comp[u] > comp[v].
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(succ[root]))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    pushed = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp, ncomp


def reachable(starts: Iterable[int], succ: Callable[[int], Iterable[int]]) -> set[int]:
    seen = set(starts)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def bfs_parents(start: int, succ: Callable[[int], Iterable[tuple[int, object]]]) -> dict[int, tuple[int, object] | None]:
    """BFS tree from start; succ yields (node, label) in preference order."""
    parent: dict[int, tuple[int, object] | None] = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, label in succ(v):
            if w not in parent:
                parent[w] = (v, label)
                queue.append(w)
    return parent


def path_labels(parent: dict, node: int) -> list:
    out = []
    while parent[node] is not None:
        prev, label = parent[node]
        out.append(label)
        node = prev
    out.reverse()
    return out
