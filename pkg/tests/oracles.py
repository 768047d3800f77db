"""Independent reference implementations used only by the tests.

None of these share code with the package beyond plain data access.
"""

from __future__ import annotations

import itertools
from collections import deque


def _reach(start, succ):
    seen, queue = {start}, deque([start])
    while queue:
        v = queue.popleft()
        for u in succ(v):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def lasso_accepts_oracle(a, w) -> bool:
    """Explicit (state, position) graph; accept on a reachable cycle through a significant edge
    (Büchi) or a reachable cycle of safe edges (coBüchi). Quadratic on purpose."""
    word = list(w.prefix) + list(w.period)
    loop = len(w.prefix)

    def nxt(i):
        return i + 1 if i + 1 < len(word) else loop

    def edges(node):
        q, i = node
        return [((t.dst, nxt(i)), t.significant) for t in a.transitions if t.src == q and t.letter == word[i]]

    reachable = _reach((a.initial, 0), lambda v: [u for u, _ in edges(v)])
    buchi = a.acceptance == "buchi"
    for v in reachable:
        for u, sig in edges(v):
            if buchi and sig:
                if v in _reach(u, lambda n: [x for x, _ in edges(n)]):
                    return True
            if not buchi and not sig:
                if v in _reach(u, lambda n: [x for x, s in edges(n) if not s]):
                    return True
    return False


def myhill_nerode_size(dfa) -> int:
    """Residual classes of the reachable states of a complete DFA, by testing every word up to length n."""
    n, m = dfa.state_count, len(dfa.alphabet)

    def run(q, word):
        for x in word:
            q = dfa.delta[q][x][0]
        return q in dfa.accepting

    reach = _reach(dfa.initial, lambda q: [dfa.delta[q][x][0] for x in range(m)])
    words = [wd for k in range(n + 1) for wd in itertools.product(range(m), repeat=k)]
    return len({tuple(run(q, wd) for wd in words) for q in reach})


def brute_force_sat(num_vars: int, clauses) -> bool:
    for bits in itertools.product((False, True), repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def dfa_consistent(delta, final, t) -> bool:
    """Complete DFA (delta[q][x], final set, start 0) against a 3-DFA; product reachability."""
    start = (t.initial, 0)
    seen, queue = {start}, deque([start])
    while queue:
        s, q = queue.popleft()
        label = "R" if s is None else t.labels[s]
        if label == "A" and q not in final or label == "R" and q in final:
            return False
        for x in range(len(t.alphabet)):
            s2 = None if s is None else t.delta[s][x]
            nxt = (s2, delta[q][x])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def min_consistent_dfa_size(t, k_max: int) -> int | None:
    """Smallest complete DFA consistent with t, over every transition table and final set."""
    m = len(t.alphabet)
    for k in range(1, k_max + 1):
        for table in itertools.product(range(k), repeat=k * m):
            delta = [table[q * m:(q + 1) * m] for q in range(k)]
            for bits in range(1 << k):
                final = {q for q in range(k) if bits >> q & 1}
                if dfa_consistent(delta, final, t):
                    return k
    return None


def solve_parity3_fixpoint(owner, edges, eve=0) -> set[int]:
    """Eve's winning region of a max-parity game with edge priorities 0..2.

    W = νZ. μY. νX. CPre over edges whose target lies in Z (priority 2), Y (1) or X (0).
    Stuck positions lose for their owner.
    """
    n = len(owner)

    def cpre(Z, Y, X):
        out = set()
        for v in range(n):
            good = [(d in (Z if p == 2 else Y if p == 1 else X)) for d, p in edges[v]]
            if owner[v] == eve and any(good) or owner[v] != eve and good and all(good):
                out.add(v)
        return out

    Z = set(range(n))
    while True:
        Y = set()
        while True:
            X = set(range(n))
            while True:
                X2 = cpre(Z, Y, X)
                if X2 == X:
                    break
                X = X2
            if X == Y:
                break
            Y = X
        if Y == Z:
            return Z
        Z = Y
