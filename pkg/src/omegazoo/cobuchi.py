"""HD Büchi to HD coBüchi complementation and canonical-form checks for coBüchi automata."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .automaton import BUCHI, COBUCHI, Automaton, AutomatonError, Lasso, Transition
from .finite import (FiniteAutomaton, build_safe, dfa_equivalent, dfa_included, live_state_count,
                     prefix_closure_dfa)
from .omega import lasso_positions, scc_decomposition


def hd_complement(a: Automaton, cert) -> Automaton:
    """coBüchi automaton on the good states of a simplified Büchi automaton.

    Safe transitions are the non-significant transitions between good states; every other
    (state, letter, state) triple is significant. The initial state is the covering image
    of a's initial state.
    """
    if cert is None:
        raise AutomatonError("hd_complement needs a simplified certificate")
    if a.acceptance != BUCHI:
        raise AutomatonError("hd_complement needs a Büchi automaton")
    keep = [q for q in range(a.state_count) if q in cert.good]
    new_of = {q: i for i, q in enumerate(keep)}
    n, m = len(keep), len(a.alphabet)
    safe = {(new_of[t.src], t.letter, new_of[t.dst]) for t in a.transitions
            if t.src in cert.good and not t.significant and t.dst in cert.good}
    trans = []
    for p in range(n):
        for x in range(m):
            for q in range(n):
                trans.append(Transition(p, x, q, (p, x, q) not in safe))
    start = a.initial if a.initial in cert.good else cert.covering[a.initial]
    names = tuple(a.state_names[q] for q in keep)
    return Automaton(f"{a.name}-complement", a.alphabet, names, new_of[start], tuple(trans), COBUCHI)


def _require_cobuchi(c: Automaton):
    if c.acceptance != COBUCHI:
        raise AutomatonError("expected a coBüchi automaton")


@dataclass
class SafeComponentView:
    """Safe subgraph of a coBüchi automaton: its SCCs and per-state safe-language DFAs."""
    automaton: Automaton

    def __post_init__(self):
        _require_cobuchi(self.automaton)

    @cached_property
    def scc(self):
        return scc_decomposition(self.automaton, lambda t: not t.significant)

    @property
    def component(self) -> tuple[int, ...]:
        return self.scc.comp

    @cached_property
    def safe_dfas(self) -> list[FiniteAutomaton]:
        """Minimal complete DFA of the finite prefixes of S(q), per state q."""
        c = self.automaton
        return [prefix_closure_dfa(build_safe(c, q)) for q in range(c.state_count)]

    def live_sizes(self) -> list[int]:
        return [live_state_count(d) for d in self.safe_dfas]


def is_safe_deterministic(c: Automaton) -> bool:
    _require_cobuchi(c)
    seen = set()
    for t in c.transitions:
        if not t.significant:
            if (t.src, t.letter) in seen:
                return False
            seen.add((t.src, t.letter))
    return True


def is_normal_cobuchi(c: Automaton) -> bool:
    """Every safe transition stays inside one safe component."""
    view = SafeComponentView(c)
    comp = view.component
    return all(comp[t.src] == comp[t.dst] for t in c.transitions if not t.significant)


def transitions_everywhere(c: Automaton) -> list[tuple[int, int, int]]:
    """(state, letter, target) triples with no transition; empty means every state reaches every state on every letter."""
    n, m = c.state_count, len(c.alphabet)
    missing = []
    for p in range(n):
        for x in range(m):
            targets = {d for d, _ in c.succ[p][x]}
            missing += [(p, x, q) for q in range(n) if q not in targets]
    return missing


def all_states_equivalent(c: Automaton) -> bool:
    """Structural equivalence certificate: L(p) = ⋃_x x·⋃_q L(q) is the same for every p."""
    return not transitions_everywhere(c)


def _safe_word_ok(c: Automaton, view: SafeComponentView, q: int, word) -> bool:
    """Direct simulation: the word has a safe run from q that can continue forever."""
    cur = {q}
    for x in word:
        cur = {d for s in cur for d, sig in c.succ[s][x] if not sig}
        if not cur:
            return False
    alive = _infinite_safe_states(c)
    return bool(cur & alive)


def _infinite_safe_states(c: Automaton) -> set[int]:
    alive = set(range(c.state_count))
    while True:
        dead = {q for q in alive if not any(not sig and d in alive
                                            for row in c.succ[q] for d, sig in row)}
        if not dead:
            return alive
        alive -= dead


@dataclass(frozen=True)
class PairWitness:
    first: int
    second: int
    word: tuple[int, ...]  # in S(first)'s prefixes exactly when not in S(second)'s


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witnesses: tuple[PairWitness, ...] = ()
    failures: tuple[tuple[int, int], ...] = ()


def is_safe_minimal(c: Automaton, view: SafeComponentView | None = None) -> CheckResult:
    """No two distinct states have the same safe language; one shortest distinguishing word per pair."""
    view = view or SafeComponentView(c)
    dfas = view.safe_dfas
    witnesses, failures = [], []
    for p in range(c.state_count):
        for q in range(p + 1, c.state_count):
            same, w = dfa_equivalent(dfas[p], dfas[q])
            if same:
                failures.append((p, q))
                continue
            # orient so that the word is a safe prefix from the first state
            first, second = (p, q) if _safe_word_ok(c, view, p, w) else (q, p)
            if not _safe_word_ok(c, view, first, w) or _safe_word_ok(c, view, second, w):
                raise AutomatonError("distinguishing word failed re-verification")
            witnesses.append(PairWitness(first, second, w))
    return CheckResult(not failures, tuple(witnesses), tuple(failures))


def is_safe_centralised(c: Automaton, view: SafeComponentView | None = None,
                        equivalent: bool = True) -> CheckResult:
    """For equivalent states in different safe components, neither safe language includes the other.

    Witnesses come in both directions per pair.
    """
    view = view or SafeComponentView(c)
    if not equivalent:
        raise AutomatonError("only the all-states-equivalent case is supported")
    dfas, comp = view.safe_dfas, view.component
    witnesses, failures = [], []
    for p in range(c.state_count):
        for q in range(p + 1, c.state_count):
            if comp[p] == comp[q]:
                continue
            inc_pq, w_pq = dfa_included(dfas[p], dfas[q])
            inc_qp, w_qp = dfa_included(dfas[q], dfas[p])
            if inc_pq or inc_qp:
                failures.append((p, q))
                continue
            witnesses += [PairWitness(p, q, w_pq), PairWitness(q, p, w_qp)]
    return CheckResult(not failures, tuple(witnesses), tuple(failures))


# ---------------------------------------------------------------- resolver

@dataclass
class LongestSuffixResolver:
    """After u·x, move to a state reached by a safe run on the longest suffix of u·x that has one.

    Memory: the current state and, for each distinct suffix start still alive, the set of
    states its safe runs reach (earliest start first; equal sets keep the earliest start).
    """
    automaton: Automaton
    safe_succ: dict = field(default_factory=dict)

    def __post_init__(self):
        c = self.automaton
        for t in c.transitions:
            if not t.significant:
                self.safe_succ[(t.src, t.letter)] = t.dst
        self.all_states = frozenset(range(c.state_count))

    @property
    def initial_memory(self):
        return (self.automaton.initial, ())

    def _post(self, states, x) -> frozenset[int]:
        return frozenset(d for s in states if (d := self.safe_succ.get((s, x))) is not None)

    def step(self, mem, x) -> tuple[Transition, tuple]:
        cur, threads = mem
        nxt = []
        for s in list(threads) + [self.all_states]:
            img = self._post(s, x)
            if img and img not in nxt:
                nxt.append(img)
        threads = tuple(nxt)
        safe = self.safe_succ.get((cur, x))
        if threads and safe is not None and safe in threads[0]:
            target = safe
        else:
            target = min(threads[0]) if threads else self.automaton.initial
        t = Transition(cur, x, target, target != safe)
        return t, (target, threads)


def run_cobuchi_resolver(r: LongestSuffixResolver, w: Lasso) -> tuple[bool, tuple[Transition, ...]]:
    """(accepting, cycle transitions): accepting iff the eventual cycle has no significant transition."""
    w = w.canonical()
    word, nxt = lasso_positions(w)
    seen, steps = {}, []
    mem, i = r.initial_memory, 0
    while (mem, i) not in seen:
        seen[(mem, i)] = len(steps)
        t, mem = r.step(mem, word[i])
        steps.append(t)
        i = nxt[i]
    cycle = tuple(steps[seen[(mem, i)]:])
    return not any(t.significant for t in cycle), cycle


def cobuchi_hd_sufficient(c: Automaton) -> tuple[bool, LongestSuffixResolver | None]:
    """Safe-deterministic with transitions everywhere; the resolver is returned when it holds."""
    _require_cobuchi(c)
    if is_safe_deterministic(c) and all_states_equivalent(c):
        return True, LongestSuffixResolver(c)
    return False, None


# ---------------------------------------------------------------- aggregate verdict

@dataclass(frozen=True)
class MinimalityReport:
    normal: bool
    safe_deterministic: bool
    semantically_deterministic: bool
    safe_minimal: CheckResult
    safe_centralised: CheckResult
    hd: bool

    @property
    def verdict(self) -> str:
        ok = (self.normal and self.safe_deterministic and self.semantically_deterministic
              and self.safe_minimal.ok and self.safe_centralised.ok and self.hd)
        return "statewise minimal" if ok else "not certified"

    def failed_checks(self) -> list[str]:
        names = {"normal": self.normal, "safe-deterministic": self.safe_deterministic,
                 "semantically deterministic": self.semantically_deterministic,
                 "safe-minimal": self.safe_minimal.ok, "safe-centralised": self.safe_centralised.ok,
                 "hd": self.hd}
        return [k for k, v in names.items() if not v]


def cobuchi_minimality_verdict(c: Automaton) -> MinimalityReport:
    """The structural checks that make an HD coBüchi automaton statewise minimal."""
    _require_cobuchi(c)
    view = SafeComponentView(c)
    sd = all_states_equivalent(c)
    hd, _ = cobuchi_hd_sufficient(c)
    minimal = is_safe_minimal(c, view)
    central = is_safe_centralised(c, view) if sd else CheckResult(False)
    return MinimalityReport(is_normal_cobuchi(c), is_safe_deterministic(c), sd, minimal, central, hd)
