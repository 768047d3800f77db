"""Seeded lasso generators: uniform random, exhaustive short, and in-language."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .automaton import Alphabet, Lasso
from .finite import FiniteAutomaton
from .graph import reachable


def random_lasso(alphabet: Alphabet, rng: random.Random, max_len: int = 12,
                 letters: Sequence[int] | None = None) -> Lasso:
    pool = list(letters) if letters is not None else list(range(len(alphabet)))
    total = rng.randint(1, max_len)
    v_len = rng.randint(1, total)
    word = [rng.choice(pool) for _ in range(total)]
    return Lasso(tuple(word[:total - v_len]), tuple(word[total - v_len:]))


def exhaustive_lassos(letters: Sequence[int], max_len: int) -> Iterator[Lasso]:
    """Every canonical lasso with |u|+|v| <= max_len over letters, each once."""
    seen = set()
    for total in range(1, max_len + 1):
        for word in itertools.product(letters, repeat=total):
            for v_len in range(1, total + 1):
                w = Lasso(word[:total - v_len], word[total - v_len:]).canonical()
                if w not in seen:
                    seen.add(w)
                    yield w


def _coreachable(f: FiniteAutomaton) -> set[int]:
    pred = [[] for _ in range(f.state_count)]
    for q, _, d in f.transitions():
        pred[d].append(q)
    return reachable(f.accepting, lambda q: pred[q])


def random_accepted_word(f: FiniteAutomaton, rng: random.Random, stop: float = 0.3,
                         max_len: int = 60) -> tuple[int, ...] | None:
    """A random word of L(f) by a walk that never leaves co-reachable states."""
    live = _coreachable(f)
    if f.initial not in live:
        return None
    out = [(q, x, d) for q, x, d in f.transitions() if d in live]
    succ: dict[int, list[tuple[int, int]]] = {}
    for q, x, d in out:
        succ.setdefault(q, []).append((x, d))
    q, word = f.initial, []
    while True:
        if q in f.accepting and (rng.random() < stop or len(word) >= max_len or q not in succ):
            return tuple(word)
        x, q = rng.choice(succ[q])
        word.append(x)


def random_in_language(ref, rng: random.Random, junk: int = 4, blocks: int = 2) -> Lasso:
    """A lasso of (Σ*·X·Σ*·y)^ω built from sampled infix words of the reference language."""
    m = len(ref.alphabet)
    sep = ref.alphabet.index(ref.separator)

    def noise():
        return [rng.randrange(m) for _ in range(rng.randint(0, junk))]

    def block():
        return noise() + list(random_accepted_word(ref.infix, rng)) + noise() + [sep]

    prefix = noise()
    period = [x for _ in range(rng.randint(1, blocks)) for x in block()]
    return Lasso(tuple(prefix), tuple(period))
