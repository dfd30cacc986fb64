from fractions import Fraction

import pytest

from shoi.algebraic import (
    INFEASIBLE,
    OPTIMAL,
    NodeContext,
    NodeOptions,
    ReuseName,
    SolutionTuple,
    build_decomposition,
    build_pp,
    column_from_pp,
    default_big_m,
    price,
    solve_node,
)
from shoi.concepts import All, Atom, Nominal, Not, Role, RoleBox, Some, internalize
from shoi.corpus import random_algebraic_instance
from shoi.parser import parse_ontology
from worked import node_x, node_x2, node_x3, problem, solve

R, S = Role("R"), Role("S")


def rows_named(pp, prefix):
    return [r for r in pp.lp.rows if r.name.startswith(prefix)]


def as_names(pp, row):
    return {pp.lp.names[j]: v for j, v in row.coeffs.items()}


def test_decomposition_of_root():
    q, _ = problem(node_x)
    assert q.describe() == {"Q_exists": ["R.B", "R.o1"], "Q_forall": [], "Q_o": ["I.o1"]}


def test_decomposition_with_reuse_record():
    q, _ = problem(node_x2)
    assert q.describe() == {"Q_exists": ["R.C", "R-.D", "R-.X(x)"], "Q_forall": ["S-.o2"], "Q_o": ["I.o2"]}
    reuse = q.q_exists[-1]
    assert reuse.reuse_of == "x"
    assert reuse.all_roles == {R.inv(), S.inv()}


def test_empty_decomposition():
    q = build_decomposition([Atom("A"), Not(Atom("B"))])
    assert q.is_empty()


def test_complex_filler_gets_fresh_name():
    q = build_decomposition([Some(R, Some(S, Atom("A")))])
    fresh = q.q_exists[0].qual
    assert q.table[fresh] == Some(S, Atom("A"))


def test_disjointness_row():
    _, pp = problem(node_x)
    (row,) = rows_named(pp, "disjoint")
    assert as_names(pp, row) == {"b[B]": 1, "b[o1]": 1}
    assert row.rel == "<=" and row.rhs == 1


def test_universal_with_role_hierarchy_rows():
    _, pp = problem(node_x2)
    (hier,) = rows_named(pp, "hierarchy")
    assert as_names(pp, hier) == {"rtop[R-]": 1, "rtop[S-]": -1} and hier.rhs == 0
    (forall,) = rows_named(pp, "forall")
    assert as_names(pp, forall) == {"rtop[S-]": 1, "b[o2]": -1} and forall.rhs == 0


def test_disjunction_row():
    doc = parse_ontology("(implies A (or B1 B2))")
    rb = doc.rolebox()
    rb.add_name("R")
    tb = internalize(doc.axioms(), rb)
    q = build_decomposition([Some(R, Atom("A"))], rolebox=rb)
    pp = build_pp(q, tb, rb)
    (row,) = rows_named(pp, "disjunction")
    assert as_names(pp, row) == {"b[A]": 1, "b[B1]": -1, "b[B2]": -1}
    assert row.rel == "<=" and row.rhs == 0


def test_first_pricing_problem():
    q, pp = problem(node_x)
    res = price(pp, {k: 10 for k in q.row_keys()})
    assert res.objective == -19
    assert res.column.pattern == {"R.o1", "I.o1"}
    assert res.column.payload["values"] == {"r[R.o1]": 1, "r[I.o1]": 1, "b[o1]": 1}


def test_final_pricing_problem_is_zero():
    q, pp = problem(node_x)
    res = price(pp, {"R.B": 1, "R.o1": 10, "I.o1": -9})
    assert res.objective == 0
    assert res.column is None


def test_column_from_pp_examples():
    _, pp = problem(node_x)
    col = column_from_pp(pp, {"r[R.o1]": 1, "r[I.o1]": 1, "b[o1]": 1})
    assert col.pattern == {"R.o1", "I.o1"} and col.cost == 1
    col = column_from_pp(pp, {"r[R.B]": 1, "b[B]": 1})
    assert col.pattern == {"R.B"} and col.cost == 1
    _, pp2 = problem(node_x2)
    col = column_from_pp(pp2, {"r[R.C]": 1, "r[R-.X(x)]": 1, "r[I.o2]": 1, "b[C]": 1, "b[X(x)]": 1,
                               "b[o2]": 1, "rtop[R-]": 1, "rtop[S-]": 1})
    assert col.pattern == {"R.C", "R-.X(x)", "I.o2"} and col.cost == 3


@pytest.mark.parametrize("warm", [True, False])
def test_root_solution(warm):
    res, rmp, pricing = solve(node_x, warm)
    assert rmp == [30, 11, 2]
    assert pricing == [-19, -9, 0]
    assert res.objective == 2
    assert set(res.tuples) == {SolutionTuple(frozenset({R}), frozenset({Nominal("o1")}), 1),
                               SolutionTuple(frozenset({R}), frozenset({Atom("B")}), 1)}


@pytest.mark.parametrize("warm", [True, False])
def test_second_node_solution(warm):
    res, rmp, _ = solve(node_x2, warm)
    assert rmp == [40, 13, 13, 4, 4]
    assert res.objective == 4
    assert set(res.tuples) == {
        SolutionTuple(frozenset({R}), frozenset({Atom("C")}), 1),
        SolutionTuple(frozenset({R.inv(), S.inv()}), frozenset({Atom("D"), Nominal("o2")}), 1, frozenset({"x"})),
    }


def test_third_node_solution():
    res, rmp, pricing = solve(node_x3)
    assert rmp == [10, 1]
    assert pricing == [-9, 0]
    assert [t.describe() for t in res.tuples] == ["<{R},{E},1>"]


def blocked_instance():
    doc = parse_ontology("(disjoint A B o)\n(instance o top)")
    rb = doc.rolebox()
    rb.add_name("R")
    tb = internalize(doc.axioms(), rb)
    q = build_decomposition([Some(R, Atom("A")), Some(R, Atom("B")), All(R, Nominal("o"))], rolebox=rb)
    return q, build_pp(q, tb, rb)


def test_disjointness_blocked_instance_is_infeasible():
    q, pp = blocked_instance()
    assert solve_node(q, pp).status == INFEASIBLE


def test_default_big_m():
    q, pp = problem(node_x)
    assert default_big_m(q, pp) == 10
    q = build_decomposition([Some(R, Atom(a)) for a in "ABCDE"])
    pp = build_pp(q)
    assert default_big_m(q, pp) == 2 * (len(pp.b) + q.size)


def test_back_reaching_universal_must_fit_current_label():
    # a neighbour holding (all (inv R) (not A)) reached by R would force (not A) here
    rb = RoleBox()
    rb.add_name("R")
    label = {Atom("A"), Some(R, All(R.inv(), Not(Atom("A"))))}
    q = build_decomposition(sorted(label), rolebox=rb)
    pp = build_pp(q, rolebox=rb, context=NodeContext(label=label))
    assert rows_named(pp, "back")
    assert solve_node(q, pp).status == INFEASIBLE
    # without the conflicting atom the same neighbour is fine
    label = {Some(R, All(R.inv(), Not(Atom("A"))))}
    q = build_decomposition(sorted(label), rolebox=rb)
    pp = build_pp(q, rolebox=rb, context=NodeContext(label=label))
    assert not rows_named(pp, "back")
    assert solve_node(q, pp).status == OPTIMAL


def test_reuse_label_constraints():
    q, _ = problem(node_x2)
    from worked import tbox

    tb, rb = tbox()
    ctx = NodeContext(reuse_labels={"x": {Atom("A"), Atom("D")}})
    pp = build_pp(q, tb, rb, ctx)
    names = [r.name for r in pp.lp.rows]
    assert "reuse X(x) has D" in names
    assert "reuse X(x) excludes C" in names
    res = solve_node(q, pp, NodeOptions(paper_m=10))
    reuse = [t for t in res.tuples if t.reuse]
    assert len(reuse) == 1 and Atom("D") in reuse[0].concepts


def test_random_instances_satisfy_solution_invariants():
    for seed in range(150):
        inst = random_algebraic_instance(seed)
        q, pp = inst.q, inst.pp
        res = solve_node(q, pp)
        assert len({c.pattern for c in res.bp.columns}) <= 2 ** q.size - 1
        if res.status != OPTIMAL:
            continue
        covered = set()
        for col, v in res.bp.selected:
            assert v >= 1
            covered |= col.pattern
        assert {e.key for e in q.q_exists} <= covered, inst.description
        for o in q.q_nominals:
            holders = [t for t in res.tuples if Nominal(o) in t.concepts]
            assert len(holders) == 1 and holders[0].n == 1, inst.description
        assert res.objective == sum(Fraction(col.cost) * v for col, v in res.bp.selected)


def test_reuse_name_is_not_a_concept():
    q, _ = problem(node_x2)
    assert any(isinstance(e.qual, ReuseName) for e in q.q_exists)
