"""Minimal separating DFAs via 3-DFAs and SAT.

A 3-DFA labels each state Accept, Reject or DontCare. A DFA B is consistent with it when
B accepts every word ending in an Accept state and rejects every word ending in a Reject
state. Missing transitions of a 3-DFA lead to a rejecting sink.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from importlib import resources

from .automaton import Alphabet, Automaton, AutomatonError
from .finite import (FiniteAutomaton, build_safe, complete, dfa_included, make_finite,
                     minimize_dfa, prefix_closure_dfa, restrict_alphabet)
from .iso import LabelledGraph, graph_isomorphism
from .sat import SAT, UNSAT, CnfInstance, SatResult, exactly_one, sat_solve

ACCEPT, REJECT, DONTCARE = "A", "R", "D"


@dataclass(frozen=True)
class ThreeDfa:
    alphabet: Alphabet
    delta: tuple[tuple[int | None, ...], ...]  # None: implicit rejecting sink
    labels: tuple[str, ...]
    initial: int = 0

    def __post_init__(self):
        if len(self.labels) != len(self.delta):
            raise AutomatonError("one label per state")
        if any(l not in (ACCEPT, REJECT, DONTCARE) for l in self.labels):
            raise AutomatonError("labels must be A, R or D")

    @property
    def state_count(self) -> int:
        return len(self.delta)

    def completed(self) -> "ThreeDfa":
        """Missing transitions made explicit: to an existing reject sink, else a new one."""
        if all(d is not None for row in self.delta for d in row):
            return self
        m = len(self.alphabet)
        sink = next((q for q in range(self.state_count) if self.labels[q] == REJECT
                     and all(d in (q, None) for d in self.delta[q])), None)
        delta = [list(row) for row in self.delta]
        labels = list(self.labels)
        if sink is None:
            sink = len(delta)
            delta.append([sink] * m)
            labels.append(REJECT)
        delta = [tuple(sink if d is None else d for d in row) for row in delta]
        return ThreeDfa(self.alphabet, tuple(delta), tuple(labels), self.initial)

    def reachable(self) -> list[int]:
        seen, order = {self.initial}, [self.initial]
        for q in order:
            for d in self.delta[q]:
                if d is not None and d not in seen:
                    seen.add(d)
                    order.append(d)
        return order

    def label_of(self, word) -> str:
        q = self.initial
        for x in word:
            q = self.delta[q][x]
            if q is None:
                return REJECT
        return self.labels[q]


# ---------------------------------------------------------------- text format

def parse_three_dfa(text: str, letters: tuple[str, ...] | None = None) -> ThreeDfa:
    """Lines "N L", "i s", "t s a s'", "a s", "r s"; "--" starts a comment."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("--", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or len(rows[0]) != 2:
        raise AutomatonError("missing 'N L' header")
    n, m = int(rows[0][0]), int(rows[0][1])
    delta = [[None] * m for _ in range(n)]
    labels = [DONTCARE] * n
    initial = 0
    for row in rows[1:]:
        tag, *args = row
        vals = [int(v) for v in args]
        if tag == "i":
            initial = vals[0]
        elif tag == "t":
            s, x, d = vals
            if delta[s][x] is not None and delta[s][x] != d:
                raise AutomatonError(f"nondeterministic listing at state {s}, letter {x}")
            delta[s][x] = d
        elif tag == "a":
            labels[vals[0]] = ACCEPT
        elif tag == "r":
            labels[vals[0]] = REJECT
        else:
            raise AutomatonError(f"unknown line tag {tag!r}")
    alphabet = Alphabet(letters if letters else tuple(str(i) for i in range(m)))
    return ThreeDfa(alphabet, tuple(tuple(r) for r in delta), tuple(labels), initial)


def format_three_dfa(t: ThreeDfa) -> str:
    lines = [f"{t.state_count} {len(t.alphabet)}", f"i {t.initial}"]
    for q, row in enumerate(t.delta):
        lines += [f"t {q} {x} {d}" for x, d in enumerate(row) if d is not None]
    lines += [f"a {q}" for q, l in enumerate(t.labels) if l == ACCEPT]
    lines += [f"r {q}" for q, l in enumerate(t.labels) if l == REJECT]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- product construction

def build_separation_3dfa(lower: FiniteAutomaton, upper: FiniteAutomaton) -> ThreeDfa:
    """Product of two complete DFAs: Accept where lower accepts, Reject where upper rejects.

    Pairs where upper has no accepting continuation collapse into one Reject state.
    """
    if lower.alphabet != upper.alphabet:
        raise AutomatonError("alphabet mismatch")
    ok, w = dfa_included(lower, upper)
    if not ok:
        raise AutomatonError(f"lower is not included in upper (word {lower.alphabet.render(w)!r})")
    lo, up = complete(lower), complete(upper)
    up_live = _coreachable(up)
    lo_live = _coreachable(lo)
    m = len(lo.alphabet)
    index: dict = {}
    order = []

    def node(key):
        if key not in index:
            index[key] = len(order)
            order.append(key)
        return index[key]

    def key_of(p, q):
        if q not in up_live:
            return "reject"
        return (p if p in lo_live else None, q)

    start = node(key_of(lo.initial, up.initial))
    delta, labels = [], []
    i = 0
    while i < len(order):
        key = order[i]
        if key == "reject":
            row = [i] * m
            labels.append(REJECT)
        else:
            p, q = key
            row = []
            for x in range(m):
                np_ = lo.target(p, x) if p is not None else None
                row.append(node(key_of(np_, up.target(q, x))))
            labels.append(ACCEPT if p is not None and p in lo.accepting else DONTCARE)
        delta.append(tuple(row))
        i += 1
    return ThreeDfa(lo.alphabet, tuple(delta), tuple(labels), start)


def _coreachable(d: FiniteAutomaton) -> set[int]:
    pred = [[] for _ in range(d.state_count)]
    for q, _, t in d.transitions():
        pred[t].append(q)
    seen, stack = set(d.accepting), list(d.accepting)
    while stack:
        q = stack.pop()
        for p in pred[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def three_dfa_graph(t: ThreeDfa) -> LabelledGraph:
    t = t.completed()
    keep = t.reachable()
    new = {q: i for i, q in enumerate(keep)}
    edges = tuple((new[q], x, new[t.delta[q][x]]) for q in keep for x in range(len(t.alphabet)))
    return LabelledGraph(tuple(t.labels[q] for q in keep), edges, new[t.initial])


def three_dfa_isomorphism(a: ThreeDfa, b: ThreeDfa) -> dict[int, int] | None:
    """State bijection of the completed, trimmed 3-DFAs (letters matched by index)."""
    return graph_isomorphism(three_dfa_graph(a), three_dfa_graph(b))


# ---------------------------------------------------------------- encoding

@dataclass(frozen=True)
class KdfaEncoding:
    cnf: CnfInstance
    k: int
    trans: dict  # (q, x, q') -> var
    final: dict  # q -> var
    alphabet: Alphabet


def encode_exists_kdfa(t: ThreeDfa, k: int, symmetry: bool = True) -> KdfaEncoding:
    """CNF satisfiable iff a complete DFA with k reachable states is consistent with t."""
    if k < 1:
        raise AutomatonError("k must be at least 1")
    t = t.completed()
    m = len(t.alphabet)
    f = CnfInstance()
    Q = range(k)
    trans = {(q, x, r): f.new_var(f"t({q},{t.alphabet.letters[x]},{r})")
             for q in Q for x in range(m) for r in Q}
    final = {q: f.new_var(f"f({q})") for q in Q}
    states = t.reachable()
    reach = {(s, q): f.new_var(f"R({s},{q})") for s in states for q in Q}
    for q in Q:
        for x in range(m):
            exactly_one(f, [trans[q, x, r] for r in Q])
    f.add([reach[t.initial, 0]])
    for s in states:
        for q in Q:
            if t.labels[s] == ACCEPT:
                f.add([-reach[s, q], final[q]])
            elif t.labels[s] == REJECT:
                f.add([-reach[s, q], -final[q]])
            for x in range(m):
                s2 = t.delta[s][x]
                for r in Q:
                    f.add([-reach[s, q], -trans[q, x, r], reach[s2, r]])
    if symmetry and k > 1:
        _bfs_symmetry(f, trans, k, m)
    return KdfaEncoding(f, k, trans, final, t.alphabet)


def _bfs_symmetry(f: CnfInstance, trans: dict, k: int, m: int):
    """States are numbered in BFS order of the DFA (parents nondecreasing, then by letter)."""
    edge = {}  # (i, j): some letter leads from i to j
    for i in range(k):
        for j in range(1, k):
            if i < j:
                v = f.new_var(f"e({i},{j})")
                edge[i, j] = v
                lits = [trans[i, x, j] for x in range(m)]
                f.add([-v] + lits)
                for l in lits:
                    f.add([-l, v])
    parent = {}
    for j in range(1, k):
        for i in range(j):
            v = f.new_var(f"p({j},{i})")
            parent[j, i] = v
            # p(j,i) <-> e(i,j) and no e(i',j) for i' < i
            f.add([-v, edge[i, j]])
            for i2 in range(i):
                f.add([-v, -edge[i2, j]])
            f.add([v, -edge[i, j]] + [edge[i2, j] for i2 in range(i)])
        f.add([parent[j, i] for i in range(j)])
    for j in range(1, k - 1):
        for i in range(j):
            for i2 in range(i):
                f.add([-parent[j, i], -parent[j + 1, i2]])
    # minimal letter of the parent edge
    low = {}
    for i in range(k):
        for j in range(i + 1, k):
            for x in range(m):
                v = f.new_var(f"m({i},{x},{j})")
                low[i, x, j] = v
                f.add([-v, trans[i, x, j]])
                for y in range(x):
                    f.add([-v, -trans[i, y, j]])
                f.add([v, -trans[i, x, j]] + [trans[i, y, j] for y in range(x)])
    for j in range(1, k - 1):
        for i in range(j):
            for x in range(m):
                for y in range(x):
                    f.add([-parent[j, i], -parent[j + 1, i], -low[i, x, j], -low[i, y, j + 1]])


def decode_dfa(model: dict[int, bool], enc: KdfaEncoding) -> FiniteAutomaton:
    m = len(enc.alphabet)
    edges = []
    for q in range(enc.k):
        for x in range(m):
            hits = [r for r in range(enc.k) if model[enc.trans[q, x, r]]]
            if len(hits) != 1:
                raise AutomatonError(f"model is not one-hot at state {q}, letter {x}")
            edges.append((q, x, hits[0]))
    accepting = [q for q in range(enc.k) if model[enc.final[q]]]
    return make_finite(enc.alphabet, enc.k, 0, edges, accepting)


def consistent_with(b: FiniteAutomaton, t: ThreeDfa) -> tuple[bool, tuple[int, ...] | None]:
    """Exact check that DFA b respects every Accept/Reject label of t; a word on failure."""
    t = t.completed()
    b = complete(b)
    start = (t.initial, b.initial)
    parent = {start: None}
    queue = [start]
    for s, q in queue:
        lab = t.labels[s]
        if (lab == ACCEPT and q not in b.accepting) or (lab == REJECT and q in b.accepting):
            word = []
            node = (s, q)
            while parent[node] is not None:
                node, x = parent[node]
                word.append(x)
            return False, tuple(reversed(word))
        for x in range(len(t.alphabet)):
            nxt = (t.delta[s][x], b.target(q, x))
            if nxt not in parent:
                parent[nxt] = ((s, q), x)
                queue.append(nxt)
    return True, None


def verify_separator(b: FiniteAutomaton, lower: FiniteAutomaton, upper: FiniteAutomaton) -> bool:
    """L(lower) ⊆ L(b) ⊆ L(upper), exactly."""
    return dfa_included(lower, b)[0] and dfa_included(b, upper)[0]


@dataclass(frozen=True)
class SeparationOutcome:
    k: int
    status: str
    dfa: FiniteAutomaton | None
    result: SatResult


def solve_kdfa(t: ThreeDfa, k: int, budget_seconds: float | None = None) -> SeparationOutcome:
    enc = encode_exists_kdfa(t, k)
    res = sat_solve(enc.cnf, budget_seconds)
    dfa = None
    if res.status == SAT:
        dfa = decode_dfa(res.model, enc)
        ok, w = consistent_with(dfa, t)
        if not ok:
            raise AutomatonError(f"decoded DFA contradicts the 3-DFA on {w}")
    return SeparationOutcome(k, res.status, dfa, res)


def min_separator_size(t: ThreeDfa, k_max: int, budget_seconds: float | None = None):
    """(smallest k with Sat, outcomes for every k tried); ascending linear search."""
    outcomes = []
    for k in range(1, k_max + 1):
        out = solve_kdfa(t, k, budget_seconds)
        outcomes.append(out)
        if out.status == SAT:
            return k, outcomes
        if out.status != UNSAT:
            raise AutomatonError(f"solver gave {out.status} at k={k}")
    raise AutomatonError(f"no separator with at most {k_max} states")


def brute_force_min_size(t: ThreeDfa, k_max: int) -> int | None:
    """Smallest complete DFA consistent with t, by exhaustive search (testing oracle)."""
    m = len(t.alphabet)
    for k in range(1, k_max + 1):
        cells = [(q, x) for q in range(k) for x in range(m)]
        for targets in itertools.product(range(k), repeat=len(cells)):
            edges = [(q, x, d) for (q, x), d in zip(cells, targets)]
            for acc in itertools.product((False, True), repeat=k):
                b = make_finite(t.alphabet, k, 0, edges, [q for q in range(k) if acc[q]])
                if consistent_with(b, t)[0]:
                    return k
    return None


# ---------------------------------------------------------------- instances

SEP_LETTERS = ("a", "b", "c", "1", "4")
INSTANCES = {"p2": "(p2)", "p5": "(p5)", "sq1": "[p1]", "sq4": "[p4]"}


def listed_instance(key: str) -> ThreeDfa:
    """Hand-transcribed 3-DFA listing (letters a, b, c, 1, 4)."""
    if key not in INSTANCES:
        raise AutomatonError(f"unknown instance {key!r}; known: {', '.join(INSTANCES)}")
    text = resources.files("omegazoo.data").joinpath(f"{key}.txt").read_text()
    return parse_three_dfa(text, SEP_LETTERS)


def listed_instances() -> dict[str, ThreeDfa]:
    return {k: listed_instance(k) for k in INSTANCES}


def theju_prefix_dfa(letters=SEP_LETTERS) -> FiniteAutomaton:
    from .zoo import zoo
    return prefix_closure_dfa(restrict_alphabet(zoo("theju"), letters))


def cmain_safe_restricted(state: str, letters=SEP_LETTERS) -> FiniteAutomaton:
    """Safe part of cmain from a state, restricted to the letters and trimmed."""
    from .zoo import zoo
    c: Automaton = zoo("cmain")
    return restrict_alphabet(build_safe(c, c.state(state)), letters)


def separation_bounds(key: str) -> tuple[FiniteAutomaton, FiniteAutomaton]:
    """(lower, upper) prefix DFAs over the restricted letters for an instance key."""
    if key not in INSTANCES:
        raise AutomatonError(f"unknown instance {key!r}; known: {', '.join(INSTANCES)}")
    lower = theju_prefix_dfa()
    upper = prefix_closure_dfa(cmain_safe_restricted(INSTANCES[key]))
    return lower, upper


def generated_instance(key: str) -> ThreeDfa:
    lower, upper = separation_bounds(key)
    return build_separation_3dfa(lower, upper)


# ---------------------------------------------------------------- exit-labelled replacements

EXIT1, EXIT2, STAY, FREE = "exit1", "exit2", "stay", "free"


@dataclass(frozen=True)
class ExitTask:
    """Deterministic reference whose state labels constrain the transition entering them.

    A replacement machine must emit exit1 (resp. exit2) exactly on the letters entering an
    exit1 (exit2) state, emit nothing on letters entering a stay state, and is unconstrained
    once a free state is reached.
    """
    alphabet: Alphabet
    delta: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    initial: int = 0

    def outputs(self, word) -> list[str]:
        q, out = self.initial, []
        for x in word:
            q = self.delta[q][x]
            out.append(self.labels[q])
        return out


@dataclass(frozen=True)
class ExitMachine:
    """Deterministic machine with an output in {None, exit1, exit2} on every transition."""
    alphabet: Alphabet
    delta: tuple[tuple[int, ...], ...]
    output: tuple[tuple[str | None, ...], ...]

    @property
    def state_count(self) -> int:
        return len(self.delta)


def encode_exists_exit_machine(task: ExitTask, k: int) -> tuple[CnfInstance, dict, dict]:
    """CNF satisfiable iff a k-state exit machine realises the task; (cnf, trans vars, output vars)."""
    m = len(task.alphabet)
    f = CnfInstance()
    Q = range(k)
    trans = {(q, x, r): f.new_var(f"t({q},{x},{r})") for q in Q for x in range(m) for r in Q}
    out = {(q, x, e): f.new_var(f"o({q},{x},{e})") for q in Q for x in range(m) for e in (EXIT1, EXIT2)}
    for q in Q:
        for x in range(m):
            exactly_one(f, [trans[q, x, r] for r in Q])
            f.add([-out[q, x, EXIT1], -out[q, x, EXIT2]])
    live = [s for s in range(len(task.delta)) if task.labels[s] != FREE]
    reach = {(s, q): f.new_var(f"R({s},{q})") for s in live for q in Q}
    f.add([reach[task.initial, 0]])
    for s in live:
        for q in Q:
            for x in range(m):
                s2 = task.delta[s][x]
                lab = task.labels[s2]
                if lab == EXIT1:
                    f.add([-reach[s, q], out[q, x, EXIT1]])
                elif lab == EXIT2:
                    f.add([-reach[s, q], out[q, x, EXIT2]])
                elif lab == STAY:
                    f.add([-reach[s, q], -out[q, x, EXIT1]])
                    f.add([-reach[s, q], -out[q, x, EXIT2]])
                    for r in Q:
                        f.add([-reach[s, q], -trans[q, x, r], reach[s2, r]])
    if k > 1:
        _bfs_symmetry(f, trans, k, m)
    return f, trans, out


def min_exit_machine(task: ExitTask, k_max: int, budget_seconds: float | None = None):
    """(smallest k, machine, statuses per k) by ascending search; the machine is re-checked."""
    statuses = []
    m = len(task.alphabet)
    for k in range(1, k_max + 1):
        f, trans, out = encode_exists_exit_machine(task, k)
        res = sat_solve(f, budget_seconds)
        statuses.append(res.status)
        if res.status == SAT:
            model = res.model
            delta = tuple(tuple(next(r for r in range(k) if model[trans[q, x, r]]) for x in range(m))
                          for q in range(k))
            output = tuple(tuple(EXIT1 if model[out[q, x, EXIT1]] else EXIT2 if model[out[q, x, EXIT2]]
                                 else None for x in range(m)) for q in range(k))
            machine = ExitMachine(task.alphabet, delta, output)
            ok, w = exit_machine_realises(machine, task)
            if not ok:
                raise AutomatonError(f"decoded machine fails the task on {w}")
            return k, machine, statuses
        if res.status != UNSAT:
            raise AutomatonError(f"solver gave {res.status} at k={k}")
    raise AutomatonError(f"no machine with at most {k_max} states")


def exit_machine_realises(machine: ExitMachine, task: ExitTask) -> tuple[bool, tuple[int, ...] | None]:
    """Exact check over the product of machine and task; a word on failure."""
    start = (task.initial, 0)
    parent = {start: None}
    queue = [start]
    m = len(task.alphabet)
    for s, q in queue:
        for x in range(m):
            s2, q2 = task.delta[s][x], machine.delta[q][x]
            lab, got = task.labels[s2], machine.output[q][x]
            bad = (lab == EXIT1 and got != EXIT1) or (lab == EXIT2 and got != EXIT2) \
                or (lab == STAY and got is not None)
            if bad:
                word = [x]
                node = (s, q)
                while parent[node] is not None:
                    node, y = parent[node]
                    word.append(y)
                return False, tuple(reversed(word))
            if lab == STAY and (s2, q2) not in parent:
                parent[(s2, q2)] = ((s, q), x)
                queue.append((s2, q2))
    return True, None


def replace_task() -> ExitTask:
    """First-completion classification read by the areplace gadget block.

    From the block start, '1' leaving l1/l2 completes a word of the first kind and '2'
    leaving l4 one of the second kind; '2' from l1/l2 and '1' from l4 restart the block.
    """
    from .zoo import REPLACE_BLOCK
    letters = ("a", "b", "c", "1", "2")
    names = ["0", "1", "2", "3", "4", EXIT1, EXIT2, FREE]
    idx = {n: i for i, n in enumerate(names)}
    m = len(letters)
    delta = [[None] * m for _ in names]
    for src, row in REPLACE_BLOCK.items():
        for x, dst in row.items():
            delta[idx[src]][letters.index(x)] = idx[dst]
    one, two = letters.index("1"), letters.index("2")
    for s in ("1", "2"):
        delta[idx[s]][one] = idx[EXIT1]
        delta[idx[s]][two] = idx["0"]
    delta[idx["4"]][two] = idx[EXIT2]
    delta[idx["4"]][one] = idx["0"]
    for s in (EXIT1, EXIT2, FREE):
        delta[idx[s]] = [idx[FREE]] * m
    if any(d is None for row in delta for d in row):
        raise AutomatonError("replace gadget block is not complete")
    labels = [STAY] * 5 + [EXIT1, EXIT2, FREE]
    return ExitTask(Alphabet(letters), tuple(tuple(r) for r in delta), tuple(labels), 0)


def minimal_dfa_size(d: FiniteAutomaton) -> int:
    return minimize_dfa(d).state_count
