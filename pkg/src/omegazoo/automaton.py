"""Transition-based Büchi and coBüchi automata with significant transitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .graph import reachable

BUCHI = "buchi"
COBUCHI = "cobuchi"


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise AutomatonError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise AutomatonError("alphabet letters must be distinct")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.letters)}

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter) -> bool:
        return letter in self._index

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise AutomatonError(f"letter {letter!r} not in alphabet") from None

    def word(self, letters: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.index(x) for x in letters)

    def render(self, word: Sequence[int], sep: str = " ") -> str:
        return sep.join(self.letters[i] for i in word)

    def tokenize(self, text: str) -> tuple[int, ...]:
        """Split text into letters: chunks separated by whitespace/commas, each split greedily."""
        out: list[int] = []
        longest = max(len(x) for x in self.letters)
        for chunk in text.replace(",", " ").split():
            i = 0
            while i < len(chunk):
                for size in range(min(longest, len(chunk) - i), 0, -1):
                    piece = chunk[i:i + size]
                    if piece in self._index:
                        out.append(self._index[piece])
                        i += size
                        break
                else:
                    raise AutomatonError(f"cannot split {chunk!r} into letters at offset {i}")
        return tuple(out)


class Transition(NamedTuple):
    src: int
    letter: int
    dst: int
    significant: bool


@dataclass(frozen=True)
class Automaton:
    name: str
    alphabet: Alphabet
    state_names: tuple[str, ...]
    initial: int
    transitions: tuple[Transition, ...]
    acceptance: str = BUCHI

    @property
    def state_count(self) -> int:
        return len(self.state_names)

    @property
    def is_buchi(self) -> bool:
        return self.acceptance == BUCHI

    @cached_property
    def _state_index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.state_names)}

    def state(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise AutomatonError(f"{self.name}: unknown state {name!r}") from None

    def states(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.state(n) for n in names)

    @cached_property
    def succ(self) -> tuple[tuple[tuple[tuple[int, bool], ...], ...], ...]:
        """succ[q][a] = ((dst, significant), ...) in insertion order."""
        table = [[[] for _ in self.alphabet.letters] for _ in self.state_names]
        for t in self.transitions:
            table[t.src][t.letter].append((t.dst, t.significant))
        return tuple(tuple(tuple(cell) for cell in row) for row in table)

    @cached_property
    def post_masks(self) -> tuple[tuple[int, ...], ...]:
        """post_masks[q][a] = bitmask of a-successors of q, any significance."""
        return tuple(tuple(sum(1 << d for d in {d for d, _ in cell}) for cell in row) for row in self.succ)

    @cached_property
    def safe_succ(self) -> tuple[tuple[tuple[tuple[int, bool], ...], ...], ...]:
        """succ restricted to non-significant transitions."""
        return tuple(tuple(tuple(e for e in cell if not e[1]) for cell in row) for row in self.succ)

    @cached_property
    def out_edges(self) -> tuple[tuple[Transition, ...], ...]:
        rows: list[list[Transition]] = [[] for _ in self.state_names]
        for t in self.transitions:
            rows[t.src].append(t)
        return tuple(tuple(r) for r in rows)

    def with_transitions(self, transitions: Iterable[Transition], **changes) -> "Automaton":
        fields = dict(name=self.name, alphabet=self.alphabet, state_names=self.state_names,
                      initial=self.initial, acceptance=self.acceptance)
        fields.update(changes)
        return Automaton(transitions=tuple(transitions), **fields)

    def describe(self, t: Transition) -> str:
        arrow = "=>" if t.significant else "->"
        return f"{self.state_names[t.src]} {arrow}{self.alphabet.letters[t.letter]} {self.state_names[t.dst]}"


def build(name: str, letters: Sequence[str], states: Sequence[str], initial: str,
          transitions: Iterable[tuple[str, str, str, bool]], acceptance: str = BUCHI,
          dedupe: bool = True) -> Automaton:
    """Build an automaton from named states and letters.

    Repeated (src, letter, dst, significant) entries are merged when dedupe is set.
    """
    alphabet = Alphabet(tuple(letters))
    index = {s: i for i, s in enumerate(states)}
    if len(index) != len(states):
        raise AutomatonError(f"{name}: duplicate state names")
    out: list[Transition] = []
    seen = set()
    for src, letter, dst, sig in transitions:
        t = Transition(index[src], alphabet.index(letter), index[dst], bool(sig))
        if dedupe and t in seen:
            continue
        seen.add(t)
        out.append(t)
    return Automaton(name, alphabet, tuple(states), index[initial], tuple(out), acceptance)


@dataclass
class ValidationReport:
    subject: str
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(a: Automaton, allow_significance_twins: bool = False) -> ValidationReport:
    """Collect every invariant violation; never raises."""
    rep = ValidationReport(a.name)
    n, m = a.state_count, len(a.alphabet)
    if a.acceptance not in (BUCHI, COBUCHI):
        rep.violations.append(f"unknown acceptance {a.acceptance!r}")
    if not 0 <= a.initial < n:
        rep.violations.append(f"initial state {a.initial} out of range")
    triples = {}
    good_ids = True
    for t in a.transitions:
        if not 0 <= t.src < n:
            rep.violations.append(f"dangling source {t.src}")
            good_ids = False
        if not 0 <= t.dst < n:
            rep.violations.append(f"dangling destination {t.dst}")
            good_ids = False
        if not 0 <= t.letter < m:
            rep.violations.append(f"bad letter index {t.letter}")
            good_ids = False
        key = (t.src, t.letter, t.dst)
        if key in triples:
            same_flag = triples[key] == t.significant
            if same_flag or not allow_significance_twins:
                rep.violations.append(f"duplicate transition {key}")
        triples[key] = t.significant
    if good_ids and 0 <= a.initial < n:
        adj = [[] for _ in range(n)]
        for t in a.transitions:
            adj[t.src].append(t.dst)
        seen = reachable([a.initial], adj.__getitem__)
        for q in range(n):
            if q not in seen:
                rep.violations.append(f"unreachable state {a.state_names[q]}")
    return rep


def trim(a: Automaton) -> Automaton:
    """Drop states unreachable from the initial state."""
    adj = [[] for _ in range(a.state_count)]
    for t in a.transitions:
        adj[t.src].append(t.dst)
    keep = sorted(reachable([a.initial], adj.__getitem__))
    if len(keep) == a.state_count:
        return a
    remap = {q: i for i, q in enumerate(keep)}
    trans = [Transition(remap[t.src], t.letter, remap[t.dst], t.significant)
             for t in a.transitions if t.src in remap]
    return Automaton(a.name, a.alphabet, tuple(a.state_names[q] for q in keep),
                     remap[a.initial], tuple(trans), a.acceptance)


def is_deterministic(a: Automaton) -> bool:
    return all(len(cell) <= 1 for row in a.succ for cell in row)


def nondeterministic_pairs(a: Automaton) -> list[tuple[int, int]]:
    return [(q, x) for q, row in enumerate(a.succ) for x, cell in enumerate(row) if len(cell) > 1]


def is_complete(a: Automaton) -> bool:
    return all(cell for row in a.succ for cell in row)


@dataclass(frozen=True)
class Lasso:
    """The ultimately periodic word prefix . period^omega over letter indices."""
    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise AutomatonError("lasso period must be nonempty")

    def canonical(self) -> "Lasso":
        v = list(self.period)
        n = len(v)
        for size in range(1, n + 1):
            if n % size == 0 and v[:size] * (n // size) == v:
                v = v[:size]
                break
        u = list(self.prefix)
        while u and u[-1] == v[-1]:
            u.pop()
            v = [v[-1]] + v[:-1]
        return Lasso(tuple(u), tuple(v))

    def __len__(self) -> int:
        return len(self.prefix) + len(self.period)

    def letter_at(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def render(self, alphabet: Alphabet, sep: str = " ") -> str:
        return f"{alphabet.render(self.prefix, sep)}:{alphabet.render(self.period, sep)}"

    @staticmethod
    def parse(text: str, alphabet: Alphabet) -> "Lasso":
        if ":" not in text:
            raise AutomatonError("lasso must be written u:v")
        u, v = text.split(":", 1)
        return Lasso(alphabet.tokenize(u), alphabet.tokenize(v))

    @staticmethod
    def of(alphabet: Alphabet, prefix: str | Sequence[str], period: str | Sequence[str]) -> "Lasso":
        def conv(x):
            return alphabet.tokenize(x) if isinstance(x, str) else alphabet.word(x)
        return Lasso(conv(prefix), conv(period))


@dataclass(frozen=True)
class Run:
    start: int
    steps: tuple[Transition, ...]

    def __post_init__(self):
        at = self.start
        for t in self.steps:
            if t.src != at:
                raise AutomatonError("run steps are not adjacent")
            at = t.dst

    @property
    def end(self) -> int:
        return self.steps[-1].dst if self.steps else self.start
