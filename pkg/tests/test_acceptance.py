"""One test per acceptance criterion; the terminal summary prints a PASS/FAIL line for each."""

import inspect
import time
from fractions import Fraction

from test_concepts import test_nnf_idempotent_and_normal as nnf_property
from test_parser import test_round_trip as round_trip_property
from worked import node_x, node_x2, node_x3, solve

from shoi import simplex
from shoi.algebraic import OPTIMAL, SolutionTuple, solve_node
from shoi.benchmarks import gen_members, gen_testont, metrics, worked_example
from shoi.concepts import Atom, Nominal, Role, internalize
from shoi.corpus import random_algebraic_instance, random_ontology
from shoi.oracle import INFEASIBLE, Consistent, brute_force_consistency, full_master_solve
from shoi.properties import verify_tableau_properties
from shoi.simplex import LE, LinearProgram, solve_lp
from shoi.tableau import CONSISTENT, INCONSISTENT, CheckOptions, check_consistency, check_document

R, S = Role("R"), Role("S")


def patterns(res):
    return {frozenset(col.pattern): v for col, v in res.bp.selected}


def test_root_node_golden_trace(acceptance):
    done = acceptance(1, "root node x: RMP 30, 11, 2; PP -19, -9, 0; sigma(x)")
    start = time.perf_counter()
    res, rmp, pricing = solve(node_x)
    elapsed = time.perf_counter() - start
    assert rmp == [30, 11, 2]
    assert pricing == [-19, -9, 0]
    assert all(isinstance(v, (int, Fraction)) for v in rmp + pricing)
    assert patterns(res) == {frozenset({"R.o1", "I.o1"}): 1, frozenset({"R.B"}): 1}
    assert set(res.tuples) == {SolutionTuple(frozenset({R}), frozenset({Nominal("o1")}), 1),
                               SolutionTuple(frozenset({R}), frozenset({Atom("B")}), 1)}
    assert elapsed < 1.0, f"{elapsed:.2f} s"
    done(True)


test_root_node_golden_trace.criterion = 1


def test_reuse_nodes_golden_trace(acceptance):
    done = acceptance(2, "nodes x2 and x3: RMP 40, 13, 13, 4, 4 and 10, 1; reuse tuple V = {x}")
    res2, rmp2, _ = solve(node_x2)
    assert rmp2 == [40, 13, 13, 4, 4]
    assert res2.objective == 4
    assert set(patterns(res2)) == {frozenset({"R.C"}), frozenset({"R-.D", "R-.X(x)", "I.o2"})}
    assert SolutionTuple(frozenset({R.inv(), S.inv()}), frozenset({Atom("D"), Nominal("o2")}), 1,
                         frozenset({"x"})) in res2.tuples
    res3, rmp3, _ = solve(node_x3)
    assert rmp3 == [10, 1]
    assert res3.objective == 1
    done(True)


test_reuse_nodes_golden_trace.criterion = 2


def test_worked_example_end_to_end(acceptance):
    done = acceptance(3, "six-axiom Tbox: CONSISTENT, P1-P10 hold, x3 merged into x1, < 1 s")
    doc = worked_example()
    start = time.perf_counter()
    res = check_document(doc, CheckOptions(paper_m=10))
    elapsed = time.perf_counter() - start
    assert res.verdict == CONSISTENT
    rb = doc.rolebox()
    report = verify_tableau_properties(res.graph, internalize(doc.axioms(), rb), rb)
    assert report.ok, report.lines()
    assert any(ev["event"] == "rule" and ev["rule"] == "nom_merge" and ev["node"] == "x3" and ev["into"] == "x1"
               for ev in res.trace)
    assert elapsed < 1.0, f"{elapsed:.2f} s"
    done(True)


test_worked_example_end_to_end.criterion = 3


def test_benchmark_verdicts(acceptance):
    done = acceptance(4, "benchmark verdicts, each within 60 s")
    cases = [(gen_members(1, "ca_provinces"), INCONSISTENT), (gen_members(1, "eu_members"), INCONSISTENT)]
    for n in (5, 7, 10, 20, 40):
        cases.append((gen_testont(n, "cons"), CONSISTENT))
        cases.append((gen_testont(n, "incons"), INCONSISTENT))
    for doc, expected in cases:
        start = time.perf_counter()
        res = check_document(doc, CheckOptions(timeout_s=60))
        elapsed = time.perf_counter() - start
        assert res.verdict == expected, (metrics(doc), res.verdict, res.reason)
        assert elapsed < 60.0
    done(True)


test_benchmark_verdicts.criterion = 4


def test_oracle_equivalence(acceptance):
    done = acceptance(5, "500 algebraic instances match full_master_solve; 200 planted ontologies have models")
    for seed in range(500):
        inst = random_algebraic_instance(seed, max_q=8)
        assert inst.q.size <= 8
        res = solve_node(inst.q, inst.pp)
        expected = full_master_solve(inst.q, inst.pp)
        if expected is INFEASIBLE:
            assert res.status != OPTIMAL, inst.description
        else:
            assert res.status == OPTIMAL, inst.description
            assert res.objective == expected.objective, inst.description
    checked = 0
    for seed in range(200):
        inst = random_ontology(seed, planted=True)
        assert inst.small_model
        rb = inst.doc.rolebox()
        tb = internalize(inst.doc.axioms(), rb)
        res = check_consistency(tb, rb, CheckOptions(timeout_s=60))
        if res.verdict == CONSISTENT:
            found = brute_force_consistency(tb, rb, 4)
            assert isinstance(found, Consistent), inst.text
            assert found.model.is_model(tb, rb)
            checked += 1
    assert checked > 0
    done(True)


test_oracle_equivalence.criterion = 5


def test_solver_unit_properties(acceptance):
    # collected last so the counters cover every LP of the run before it
    done = acceptance(6, "strong duality on every optimal LP, no basis repeats, NNF and round-trip x1000")
    assert inspect.signature(solve_lp).parameters["check_cycles"].default is True
    f = Fraction
    lp = LinearProgram([f(-3, 4), 20, f(-1, 2), 6])
    lp.add_row({0: f(1, 4), 1: -8, 2: -1, 3: 9}, LE, 0)
    lp.add_row({0: f(1, 2), 1: -12, 2: f(-1, 2), 3: 3}, LE, 0)
    lp.add_row({2: 1}, LE, 1)
    assert solve_lp(lp).objective == f(-5, 4)
    assert simplex.STATS["optimal"] > 0
    assert simplex.STATS["optimal"] == simplex.STATS["certified"]
    nnf_property()
    round_trip_property()
    done(True)


test_solver_unit_properties.criterion = 6
