"""CNF instances, DIMACS I/O and a CDCL SAT solver.

The solver uses two watched literals, first-UIP clause learning with minimisation,
VSIDS branching on a binary heap, phase saving and Luby restarts.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

SAT, UNSAT, TIMEOUT = "Sat", "Unsat", "Timeout"


@dataclass
class CnfInstance:
    num_vars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    legend: dict[int, str] = field(default_factory=dict)

    def new_var(self, name: str = "") -> int:
        self.num_vars += 1
        if name:
            self.legend[self.num_vars] = name
        return self.num_vars

    def add(self, lits: Iterable[int]):
        clause = tuple(lits)
        if not clause:
            raise ValueError("empty clause")
        if any(abs(l) > self.num_vars or l == 0 for l in clause):
            raise ValueError(f"literal out of range in {clause}")
        self.clauses.append(clause)

    def satisfied_by(self, model: dict[int, bool]) -> bool:
        return all(any(model.get(abs(l), False) == (l > 0) for l in c) for c in self.clauses)


def to_dimacs(f: CnfInstance) -> str:
    lines = [f"c {v} {name}" for v, name in sorted(f.legend.items())]
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> CnfInstance:
    f = CnfInstance()
    declared, pending = None, []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split(maxsplit=2)
            if len(parts) == 3 and parts[1].isdigit():
                f.legend[int(parts[1])] = parts[2]
            continue
        if line.startswith("p"):
            _, kind, nv, nc = line.split()
            if kind != "cnf":
                raise ValueError(f"unsupported DIMACS kind {kind!r}")
            f.num_vars, declared = int(nv), int(nc)
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                f.add(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        f.add(pending)
    if declared is not None and declared != len(f.clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(f.clauses)}")
    return f


@dataclass
class SatResult:
    status: str
    model: dict[int, bool] | None = None
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    seconds: float = 0.0


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class _Solver:
    # literals are encoded as 2*v (positive) and 2*v+1 (negative) for v in 0..n-1

    def __init__(self, f: CnfInstance):
        n = f.num_vars
        self.n = n
        self.value = [-1] * (2 * n)      # per literal: 1 true, 0 false, -1 unassigned
        self.level = [0] * n
        self.reason: list[list[int] | None] = [None] * n
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * n)]
        self.activity = [0.0] * n
        self.inc = 1.0
        self.phase = [1] * n             # saved polarity: 1 means negative literal first
        self.heap = [(-0.0, v) for v in range(n)]
        heapq.heapify(self.heap)
        self.ok = True
        self.stats = {"decisions": 0, "conflicts": 0, "propagations": 0}
        for c in f.clauses:
            lits = sorted({self._lit(l) for l in c})
            if any(l ^ 1 in lits for l in lits):
                continue  # tautology
            if not self._add_input(lits):
                self.ok = False
                return

    @staticmethod
    def _lit(l: int) -> int:
        return 2 * (abs(l) - 1) + (l < 0)

    def _add_input(self, lits: list[int]) -> bool:
        lits = [l for l in lits if self.value[l] != 0]
        if any(self.value[l] == 1 for l in lits):
            return True
        if not lits:
            return False
        if len(lits) == 1:
            self._assign(lits[0], None)
            return self._propagate() is None
        self.watches[lits[0] ^ 1].append(lits)
        self.watches[lits[1] ^ 1].append(lits)
        return True

    def _assign(self, lit: int, reason):
        v = lit >> 1
        self.value[lit] = 1
        self.value[lit ^ 1] = 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        """Unit propagation; returns a conflicting clause or None."""
        value = self.value
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            self.stats["propagations"] += 1
            false_lit = lit ^ 1
            ws = self.watches[lit]
            i = j = 0
            while i < len(ws):
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if value[c[0]] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if value[c[k]] != 0:
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1] ^ 1].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if value[c[0]] == 0:
                        while i < len(ws):
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return c
                    self._assign(c[0], c)
            del ws[j:]
        return None

    def _bump(self, v: int):
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(self.n) if self.value[2 * u] == -1]
            heapq.heapify(self.heap)
        elif self.value[2 * v] == -1:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen = [False] * self.n
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        clause = confl
        while True:
            for q in (clause if p is None else clause[1:]):
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = False
            counter -= 1
            if counter == 0:
                break
            clause = self.reason[v]
        learnt[0] = p ^ 1
        # minimisation: drop literals implied by other literals of the clause
        marked = {l >> 1 for l in learnt}
        kept = [learnt[0]]
        for l in learnt[1:]:
            r = self.reason[l >> 1]
            if r is None or not all((q >> 1) in marked or self.level[q >> 1] == 0 for q in r[1:]):
                kept.append(l)
        learnt = kept
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda k: self.level[learnt[k] >> 1])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = self.level[learnt[1] >> 1]
        return learnt, back

    def _backtrack(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        for k in range(len(self.trail) - 1, self.trail_lim[lvl] - 1, -1):
            lit = self.trail[k]
            v = lit >> 1
            self.phase[v] = lit & 1
            self.value[lit] = self.value[lit ^ 1] = -1
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[self.trail_lim[lvl]:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int | None:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.value[2 * v] == -1:
                return v
        return None

    def solve(self, deadline: float | None, max_conflicts: int | None) -> str:
        if not self.ok:
            return UNSAT
        if self._propagate() is not None:
            return UNSAT
        restart_no, budget = 1, 100 * luby(1)
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats["conflicts"] += 1
                since_restart += 1
                if not self.trail_lim:
                    return UNSAT
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self.watches[learnt[0] ^ 1].append(learnt)
                    self.watches[learnt[1] ^ 1].append(learnt)
                    self._assign(learnt[0], learnt)
                self.inc /= 0.95
                if max_conflicts is not None and self.stats["conflicts"] >= max_conflicts:
                    return TIMEOUT
                if deadline is not None and self.stats["conflicts"] % 64 == 0 and time.monotonic() > deadline:
                    return TIMEOUT
                continue
            if since_restart >= budget:
                restart_no += 1
                budget = 100 * luby(restart_no)
                since_restart = 0
                self._backtrack(0)
                continue
            v = self._pick()
            if v is None:
                return SAT
            self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._assign(2 * v + self.phase[v], None)

    def model(self) -> dict[int, bool]:
        return {v + 1: self.value[2 * v] == 1 for v in range(self.n)}


def sat_solve(f: CnfInstance, budget_seconds: float | None = None,
              max_conflicts: int | None = None) -> SatResult:
    """Solve f; Sat models are re-checked against every clause."""
    start = time.monotonic()
    deadline = start + budget_seconds if budget_seconds is not None else None
    s = _Solver(f)
    status = s.solve(deadline, max_conflicts)
    model = None
    if status == SAT:
        model = s.model()
        if not f.satisfied_by(model):
            raise AssertionError("solver returned a model that violates a clause")
    return SatResult(status, model, s.stats["decisions"], s.stats["conflicts"],
                     s.stats["propagations"], time.monotonic() - start)


def brute_force_sat(f: CnfInstance) -> bool:
    """Exhaustive check for tiny instances (testing oracle)."""
    import itertools
    for bits in itertools.product((False, True), repeat=f.num_vars):
        model = {v + 1: b for v, b in enumerate(bits)}
        if f.satisfied_by(model):
            return True
    return False


def exactly_one(f: CnfInstance, lits: Sequence[int]):
    f.add(lits)
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            f.add((-lits[i], -lits[j]))
