"""Resolvers for simplified Büchi automata and exact evaluation on lassos."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .automaton import Automaton, AutomatonError, Lasso, Transition
from .games import GameArena, Solution, simulates
from .omega import build_reach, good_states, lasso_positions

# memory: (current state, covered-from non-good state or None, arena position or None)
Memory = tuple[int, "int | None", "int | None"]


@dataclass
class Resolver:
    """Deterministic transducer emitting one transition of `automaton` per letter.

    In a good state the move is forced (unique non-significant successor, else the first
    significant one). In a non-good state p the resolver follows Eve's strategy in the
    reach-simulation game against covering[p]; every significant step restarts it.
    """
    automaton: Automaton
    covering: Mapping[int, int]
    good: frozenset[int]
    games: dict[int, tuple[GameArena, Solution]]

    @property
    def initial_memory(self) -> Memory:
        return self._enter(self.automaton.initial)

    def _enter(self, q: int) -> Memory:
        if q in self.good:
            return (q, None, None)
        g, _ = self.games[q]
        return (q, q, g.initial)

    def step(self, mem: Memory, x: int) -> tuple[Transition | None, Memory | None]:
        """The emitted transition and the next memory; (None, None) when the run dies."""
        a = self.automaton
        cur, origin, pos = mem
        cell = a.succ[cur][x]
        if not cell:
            return None, None
        if origin is None:
            plain = [(d, s) for d, s in cell if not s]
            d, s = plain[0] if plain else cell[0]
            t = Transition(cur, x, d, s)
            return t, (self._enter(d) if s else (d, None, None))
        g, sol = self.games[origin]
        sink = a.state_count
        adam_move = g.edges[pos]
        # Adam's token runs in the good part of reach(a), so his letter-x move is unique
        eve_pos = next((w for w, _ in adam_move if g.payload[w][0] == "E" and g.payload[w][4] == x), None)
        if eve_pos is None:
            # the covered state has no x-move: any continuation is fine, stay a valid run
            plain = [(d, s) for d, s in cell if not s]
            d, s = plain[0] if plain else cell[0]
            t = Transition(cur, x, d, s)
            return t, self._enter(d)
        w, _ = g.edges[eve_pos][sol.eve_strategy[eve_pos]]
        _, _, de = g.payload[w]
        if de == sink:
            d = next(d for d, s in cell if s)
            return Transition(cur, x, d, True), self._enter(d)
        if de not in [d for d, s in cell if not s]:
            raise AutomatonError("strategy left the automaton")  # unreachable for a sound arena
        return Transition(cur, x, de, False), (de, origin, w)


def build_resolver(a: Automaton, covering: Mapping[int, int]) -> Resolver:
    """Resolver from a covering map (non-good state -> good state it simulates in reach(a))."""
    good = good_states(a)
    missing = [a.state_names[q] for q in range(a.state_count) if q not in good and q not in covering]
    if missing:
        raise AutomatonError(f"covering incomplete: {', '.join(missing)}")
    reach = build_reach(a)
    games = {}
    for p, q in covering.items():
        won, g, sol = simulates(reach, q, reach, p)
        if not won:
            raise AutomatonError(f"{a.state_names[p]} does not simulate {a.state_names[q]} in reach")
        games[p] = (g, sol)
    return Resolver(a, dict(covering), good, games)


@dataclass(frozen=True)
class ResolverRun:
    accepting: bool
    prefix: tuple[Transition, ...]
    cycle: tuple[Transition, ...]
    died: bool = False


def run_resolver_cycle(r: Resolver, w: Lasso) -> ResolverRun:
    """Exact verdict of the resolver's run on u.v^omega via cycle detection on (memory, position)."""
    w = w.canonical()
    word, nxt = lasso_positions(w)
    seen: dict[tuple, int] = {}
    steps: list[Transition] = []
    mem, i = r.initial_memory, 0
    while (mem, i) not in seen:
        seen[(mem, i)] = len(steps)
        t, mem = r.step(mem, word[i])
        if t is None:
            return ResolverRun(False, tuple(steps), (), died=True)
        steps.append(t)
        i = nxt[i]
    start = seen[(mem, i)]
    cycle = tuple(steps[start:])
    return ResolverRun(any(t.significant for t in cycle), tuple(steps[:start]), cycle)

