"""Parity games with priorities {0,1,2} on edges (max-parity, even wins for Eve) and game builders."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable

from .automaton import Automaton, AutomatonError
from .graph import tarjan_scc

EVE, ADAM = 0, 1
DEAD = -1  # a token whose run has no continuation


@dataclass
class GameArena:
    """Positions with owners and payloads; edges (dst, priority) per position."""
    owner: list[int] = field(default_factory=list)
    payload: list[Hashable] = field(default_factory=list)
    edges: list[list[tuple[int, int]]] = field(default_factory=list)
    initial: int = 0
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.owner)

    def position(self, payload: Hashable, owner: int) -> tuple[int, bool]:
        """Index of the position with this payload, creating it if new."""
        v = self._index.get(payload)
        if v is not None:
            return v, False
        v = len(self.owner)
        self._index[payload] = v
        self.owner.append(owner)
        self.payload.append(payload)
        self.edges.append([])
        return v, True

    def index_of(self, payload: Hashable) -> int | None:
        return self._index.get(payload)

    def complete(self):
        """Give every stuck position a self-loop that makes its owner lose."""
        for v in range(self.size):
            if not self.edges[v]:
                self.edges[v].append((v, 1 if self.owner[v] == EVE else 2))

    def to_json(self) -> str:
        return json.dumps({
            "initial": self.initial,
            "positions": [{"id": v, "owner": "eve" if o == EVE else "adam", "payload": repr(p)}
                          for v, (o, p) in enumerate(zip(self.owner, self.payload))],
            "edges": [[v, d, pr] for v in range(self.size) for d, pr in self.edges[v]],
        })


@dataclass(frozen=True)
class Solution:
    eve_region: frozenset[int]
    adam_region: frozenset[int]
    eve_strategy: dict[int, int]  # Eve position -> index into arena.edges[position]
    adam_strategy: dict[int, int] = field(default_factory=dict)  # same, for Adam in his region

    def eve_wins(self, v: int) -> bool:
        return v in self.eve_region


def solve_parity3(g: GameArena) -> Solution:
    """Zielonka's recursive algorithm on the arena with every positive-priority edge split."""
    g.complete()
    n = g.size
    # expanded graph: positions 0..n-1 (priority 0), then one node per positive edge
    succ: list[list[int]] = [[] for _ in range(n)]
    prio = [0] * n
    owner = list(g.owner)
    edge_of: dict[tuple[int, int], int] = {}  # (position, successor node) -> edge index
    for v in range(n):
        for k, (d, p) in enumerate(g.edges[v]):
            if p == 0:
                node = d
            else:
                node = len(prio)
                prio.append(p)
                owner.append(EVE)
                succ.append([d])
            succ[v].append(node)
            edge_of.setdefault((v, node), k)
    total = len(prio)
    pred: list[list[int]] = [[] for _ in range(total)]
    for v in range(total):
        for w in succ[v]:
            pred[w].append(v)

    strategy = [{}, {}]

    def attractor(alive: set[int], target: set[int], player: int):
        attr = set(target)
        count = {}
        queue = list(target)
        choice = {}
        while queue:
            w = queue.pop()
            for v in pred[w]:
                if v not in alive or v in attr:
                    continue
                if owner[v] == player:
                    attr.add(v)
                    choice[v] = w
                    queue.append(v)
                else:
                    if v not in count:
                        count[v] = sum(1 for u in succ[v] if u in alive)
                    count[v] -= 1
                    if count[v] == 0:
                        attr.add(v)
                        queue.append(v)
        return attr, choice

    def solve(alive: set[int]) -> tuple[set[int], set[int]]:
        won = [set(), set()]
        while alive:
            d = max(prio[v] for v in alive)
            i = d % 2
            top = {v for v in alive if prio[v] == d}
            a, choice = attractor(alive, top, i)
            sub = solve(alive - a)
            if not sub[1 - i]:
                for v, w in choice.items():
                    strategy[i][v] = w
                for v in top:
                    if owner[v] == i:
                        strategy[i][v] = next(u for u in succ[v] if u in alive)
                won[i] |= alive
                return won[0], won[1]
            b, choice = attractor(alive, sub[1 - i], 1 - i)
            for v, w in choice.items():
                strategy[1 - i][v] = w
            won[1 - i] |= b
            alive = alive - b
        return won[0], won[1]

    import sys
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10000))
    try:
        w0, _ = solve(set(range(total)))
    finally:
        sys.setrecursionlimit(limit)
    eve = frozenset(v for v in w0 if v < n)
    adam = frozenset(range(n)) - eve
    strats = ({}, {})
    for v in range(n):
        who = g.owner[v]
        if v in (eve if who == EVE else adam):
            strats[who][v] = edge_of[(v, strategy[who][v])]
    return Solution(eve, adam, strats[EVE], strats[ADAM])


def verify_strategy(g: GameArena, strategy: dict[int, int], region) -> bool:
    """Every play from region consistent with the Eve strategy stays in region and is won by Eve."""
    region = set(region)
    adj: dict[int, list[tuple[int, int]]] = {}
    for v in region:
        if g.owner[v] == EVE:
            if v not in strategy or not 0 <= strategy[v] < len(g.edges[v]):
                return False
            moves = [g.edges[v][strategy[v]]]
        else:
            moves = g.edges[v]
        for d, _ in moves:
            if d not in region:
                return False
        adj[v] = moves
    # an odd-max cycle exists iff some priority-1 edge lies on a cycle avoiding priority-2 edges
    nodes = sorted(region)
    idx = {v: i for i, v in enumerate(nodes)}
    low = [[idx[d] for d, p in adj[v] if p < 2] for v in nodes]
    comp, _ = tarjan_scc(len(nodes), low)
    for v in nodes:
        for d, p in adj[v]:
            if p == 1 and comp[idx[v]] == comp[idx[d]]:
                return False
    return True


def _check_alphabets(a: Automaton, b: Automaton):
    if a.alphabet != b.alphabet:
        raise AutomatonError("alphabet mismatch")


def _moves(a: Automaton, q: int, x: int):
    """Successor options of a token; a dead token stays dead."""
    if q == DEAD:
        return [(DEAD, False)]
    cell = a.succ[q][x]
    return list(dict.fromkeys(cell)) if cell else [(DEAD, False)]


def simulation_arena(spoiler: Automaton, p: int, duplicator: Automaton, q: int) -> GameArena:
    """Adam plays (letter, transition) in spoiler from p; Eve answers in duplicator from q.

    Round priority: 2 if Eve's transition is significant, else 1 if Adam's is, else 0.
    A token with no transition on the chosen letter dies and never accepts again.
    """
    _check_alphabets(spoiler, duplicator)
    g = GameArena()
    g.initial, _ = g.position(("A", p, q), ADAM)
    stack = [g.initial]
    m = len(spoiler.alphabet)
    while stack:
        v = stack.pop()
        kind = g.payload[v]
        if kind[0] == "A":
            _, sa, se = kind
            if sa == DEAD:
                continue  # Adam has lost his run; completion gives Eve the win
            for x in range(m):
                for da, siga in dict.fromkeys(spoiler.succ[sa][x]):
                    w, new = g.position(("E", da, siga, se, x), EVE)
                    g.edges[v].append((w, 0))
                    if new:
                        stack.append(w)
        else:
            _, da, siga, se, x = kind
            for de, sige in _moves(duplicator, se, x):
                w, new = g.position(("A", da, de), ADAM)
                g.edges[v].append((w, 2 if sige else 1 if siga else 0))
                if new:
                    stack.append(w)
    g.complete()
    return g


def two_token_arena(a: Automaton) -> GameArena:
    """Eve moves one token after Adam's letter; then Adam moves two tokens.

    Eve wins iff (some Adam token accepts) implies (her token accepts).
    """
    g = GameArena()
    q0 = a.initial
    g.initial, _ = g.position(("L", q0, (q0, q0)), ADAM)
    stack = [g.initial]
    m = len(a.alphabet)
    while stack:
        v = stack.pop()
        kind = g.payload[v]
        if kind[0] == "L":
            _, e, pair = kind
            for x in range(m):
                w, new = g.position(("E", e, pair, x), EVE)
                g.edges[v].append((w, 0))
                if new:
                    stack.append(w)
        elif kind[0] == "E":
            _, e, pair, x = kind
            for de, sige in _moves(a, e, x):
                w, new = g.position(("T", de, sige, pair, x), ADAM)
                g.edges[v].append((w, 0))
                if new:
                    stack.append(w)
        else:
            _, de, sige, (t1, t2), x = kind
            for d1, s1 in _moves(a, t1, x):
                for d2, s2 in _moves(a, t2, x):
                    pair = (d1, d2) if d1 <= d2 else (d2, d1)
                    w, new = g.position(("L", de, pair), ADAM)
                    g.edges[v].append((w, 2 if sige else 1 if (s1 or s2) else 0))
                    if new:
                        stack.append(w)
    g.complete()
    return g


def decide_hd_two_token(a: Automaton) -> bool:
    """History-determinism of a Büchi automaton via the two-token game."""
    if not a.is_buchi:
        raise AutomatonError("decide_hd_two_token needs a Büchi automaton")
    g = two_token_arena(a)
    return solve_parity3(g).eve_wins(g.initial)


def simulates(spoiler: Automaton, p: int, duplicator: Automaton, q: int):
    """(won, arena, solution) for the game where duplicator from q answers spoiler from p."""
    g = simulation_arena(spoiler, p, duplicator, q)
    sol = solve_parity3(g)
    return sol.eve_wins(g.initial), g, sol
