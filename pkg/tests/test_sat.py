import pytest
from hypothesis import given, strategies as st

from omegazoo.sat import (SAT, TIMEOUT, UNSAT, CnfInstance, brute_force_sat, exactly_one, from_dimacs,
                          luby, sat_solve, to_dimacs)

from oracles import brute_force_sat as oracle_sat


@st.composite
def cnfs(draw, max_vars=8, max_clauses=30):
    n = draw(st.integers(1, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=4), max_size=max_clauses))
    f = CnfInstance(num_vars=n)
    for c in clauses:
        f.add(c)
    return f


@given(cnfs())
def test_cdcl_matches_brute_force(f):
    res = sat_solve(f)
    assert (res.status == SAT) == oracle_sat(f.num_vars, f.clauses)
    if res.status == SAT:
        assert f.satisfied_by(res.model)


@given(cnfs(max_vars=14, max_clauses=70))
def test_cdcl_matches_brute_force_on_denser_formulas(f):
    assert (sat_solve(f).status == SAT) == oracle_sat(f.num_vars, f.clauses)


@given(cnfs())
def test_dimacs_round_trip_keeps_clauses_and_status(f):
    g = from_dimacs(to_dimacs(f))
    assert g.num_vars == f.num_vars and g.clauses == f.clauses
    assert sat_solve(g).status == sat_solve(f).status


def test_dimacs_legend_round_trip():
    f = CnfInstance()
    x, y = f.new_var("x"), f.new_var("y(1,2)")
    f.add([x, -y])
    g = from_dimacs(to_dimacs(f))
    assert g.legend == {1: "x", 2: "y(1,2)"}


def test_dimacs_errors():
    with pytest.raises(ValueError):
        from_dimacs("p cnf 1 2\n1 0\n")
    with pytest.raises(ValueError):
        from_dimacs("p dnf 1 1\n1 0\n")
    with pytest.raises(ValueError):
        CnfInstance(num_vars=1).add([2])
    with pytest.raises(ValueError):
        CnfInstance(num_vars=1).add([])


def test_luby_sequence():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def pigeonhole(holes):
    f = CnfInstance()
    x = {(p, h): f.new_var(f"x{p}{h}") for p in range(holes + 1) for h in range(holes)}
    for p in range(holes + 1):
        f.add([x[p, h] for h in range(holes)])
    for h in range(holes):
        for p in range(holes + 1):
            for q in range(p + 1, holes + 1):
                f.add([-x[p, h], -x[q, h]])
    return f


def test_pigeonhole_is_unsat():
    assert sat_solve(pigeonhole(5)).status == UNSAT


def test_conflict_budget_gives_timeout():
    res = sat_solve(pigeonhole(7), max_conflicts=10)
    assert res.status == TIMEOUT and res.model is None


def test_time_budget_gives_timeout():
    assert sat_solve(pigeonhole(9), budget_seconds=0.2).status == TIMEOUT


def test_exactly_one_encoding():
    f = CnfInstance()
    vs = [f.new_var() for _ in range(4)]
    exactly_one(f, vs)
    res = sat_solve(f)
    assert sum(res.model[v] for v in vs) == 1
    assert brute_force_sat(f)
