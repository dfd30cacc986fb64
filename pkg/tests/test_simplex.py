import itertools
import random
from fractions import Fraction

import pytest
from scipy.optimize import linprog

from shoi import simplex
from shoi.simplex import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    BinarySystem,
    BPOptions,
    Column,
    LinearProgram,
    MasterRow,
    PricingResult,
    branch_and_price,
    solve_binary,
    solve_lp,
)


def test_single_constraint():
    lp = LinearProgram([1])
    lp.add_row({0: 1}, GE, 1)
    out = solve_lp(lp)
    assert out.status == OPTIMAL
    assert out.objective == 1
    assert out.duals == [1]


def test_first_restricted_master_with_artificials():
    # three artificial columns with cost M = 10, rows R_B >= 1, R_o1 >= 1, I_o1 = 1
    lp = LinearProgram([10, 10, 10])
    lp.add_row({0: 1}, GE, 1, "R.B")
    lp.add_row({1: 1}, GE, 1, "R.o1")
    lp.add_row({2: 1}, EQ, 1, "I.o1")
    out = solve_lp(lp)
    assert out.objective == 30
    assert out.duals == [10, 10, 10]


def test_third_restricted_master():
    # artificials h_B, h_o1, h_I then x_{R_o1 I_o1} and x_{R_B}, both of cost 1
    lp = LinearProgram([10, 10, 10, 1, 1])
    lp.add_row({0: 1, 4: 1}, GE, 1, "R.B")
    lp.add_row({1: 1, 3: 1}, GE, 1, "R.o1")
    lp.add_row({2: 1, 3: 1}, EQ, 1, "I.o1")
    out = solve_lp(lp)
    assert out.objective == 2
    assert out.x == [0, 0, 0, 1, 1]


def test_exact_rational_values():
    lp = LinearProgram([1, 1])
    lp.add_row({0: 3, 1: 1}, GE, 1)
    lp.add_row({0: 1, 1: 3}, GE, 1)
    out = solve_lp(lp)
    assert out.objective == Fraction(1, 2)
    assert out.x == [Fraction(1, 4), Fraction(1, 4)]


def test_infeasible_and_unbounded():
    lp = LinearProgram([1])
    lp.add_row({0: 1}, LE, -1)
    assert solve_lp(lp).status == INFEASIBLE
    lp = LinearProgram([-1, 0])
    lp.add_row({0: 1, 1: -1}, LE, 0)
    assert solve_lp(lp).status == UNBOUNDED


def test_beale_cycling_example_terminates():
    f = Fraction
    lp = LinearProgram([f(-3, 4), 20, f(-1, 2), 6])
    lp.add_row({0: f(1, 4), 1: -8, 2: -1, 3: 9}, LE, 0)
    lp.add_row({0: f(1, 2), 1: -12, 2: f(-1, 2), 3: 3}, LE, 0)
    lp.add_row({2: 1}, LE, 1)
    out = solve_lp(lp, check_cycles=True)
    assert out.status == OPTIMAL
    assert out.objective == f(-5, 4)


def random_lp(rng: random.Random) -> LinearProgram:
    n = rng.randint(1, 5)
    lp = LinearProgram([rng.randint(-4, 4) for _ in range(n)])
    for j in range(n):
        if rng.random() < 0.5:
            lp.upper[j] = rng.randint(1, 4)
        if rng.random() < 0.2:
            lp.lower[j] = rng.randint(0, 1)
            if lp.upper[j] is not None:
                lp.upper[j] = max(lp.upper[j], lp.lower[j])
    for _ in range(rng.randint(1, 4)):
        coeffs = {j: rng.randint(-3, 3) for j in range(n) if rng.random() < 0.7}
        lp.add_row(coeffs, rng.choice((LE, GE, EQ)), rng.randint(-5, 5))
    return lp


def scipy_solve(lp: LinearProgram):
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for r in lp.rows:
        dense = [float(r.coeffs.get(j, 0)) for j in range(lp.n)]
        if r.rel == LE:
            a_ub.append(dense)
            b_ub.append(float(r.rhs))
        elif r.rel == GE:
            a_ub.append([-v for v in dense])
            b_ub.append(-float(r.rhs))
        else:
            a_eq.append(dense)
            b_eq.append(float(r.rhs))
    return linprog(
        [float(c) for c in lp.objective],
        A_ub=a_ub or None, b_ub=b_ub or None, A_eq=a_eq or None, b_eq=b_eq or None,
        bounds=list(zip(lp.lower, lp.upper)), method="highs",
    )


def test_random_lps_agree_with_highs():
    rng = random.Random(11)
    seen = {OPTIMAL: 0, INFEASIBLE: 0, UNBOUNDED: 0}
    for _ in range(400):
        lp = random_lp(rng)
        out = solve_lp(lp)
        ref = scipy_solve(lp)
        seen[out.status] += 1
        expected = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}[ref.status]
        assert out.status == expected, lp.dump()
        if out.status == OPTIMAL:
            assert abs(float(out.objective) - ref.fun) < 1e-7, lp.dump()
    assert all(seen.values())


def test_warm_start_reaches_same_optimum():
    rng = random.Random(5)
    for _ in range(100):
        lp = random_lp(rng)
        cold = solve_lp(lp)
        if cold.status != OPTIMAL:
            continue
        lp.add_var(rng.randint(-2, 3), upper=2)
        lp.rows[0].coeffs[lp.n - 1] = 1
        fresh = solve_lp(lp)
        warm = solve_lp(lp, cold.basis)
        assert warm.status == fresh.status
        if fresh.status == OPTIMAL:
            assert warm.objective == fresh.objective


def test_every_optimal_outcome_is_certified():
    before = dict(simplex.STATS)
    rng = random.Random(3)
    for _ in range(50):
        solve_lp(random_lp(rng))
    optimal = simplex.STATS["optimal"] - before["optimal"]
    assert optimal > 0
    assert simplex.STATS["certified"] - before["certified"] == optimal
    assert simplex.STATS["duality_checks"] - before["duality_checks"] >= optimal


def brute_binary(lp: LinearProgram, tie):
    best = None
    for bits in itertools.product((0, 1), repeat=lp.n):
        ok = True
        for r in lp.rows:
            v = sum(c * bits[j] for j, c in r.coeffs.items())
            if (r.rel == LE and v > r.rhs) or (r.rel == GE and v < r.rhs) or (r.rel == EQ and v != r.rhs):
                ok = False
                break
        if ok:
            key = (sum(c * b for c, b in zip(lp.objective, bits)), sum(t * b for t, b in zip(tie, bits)))
            if best is None or key < best:
                best = key
    return best


def random_binary(rng: random.Random) -> tuple[LinearProgram, list]:
    n = rng.randint(1, 9)
    lp = LinearProgram([rng.randint(-5, 5) for _ in range(n)])
    for _ in range(rng.randint(0, 6)):
        k = rng.randint(1, min(3, n))
        coeffs = {j: rng.choice((-1, 1, 2)) for j in rng.sample(range(n), k)}
        lp.add_row(coeffs, rng.choice((LE, LE, GE, EQ)), rng.randint(-1, 2))
    tie = [-(2 ** rng.randint(0, 4)) if rng.random() < 0.5 else 0 for _ in range(n)]
    return lp, tie


@pytest.mark.parametrize("bounding", ["clique", "lp"])
def test_solve_binary_matches_brute_force(bounding):
    rng = random.Random(17)
    for _ in range(300):
        lp, tie = random_binary(rng)
        out = solve_binary(lp, tie, bounding=bounding)
        ref = brute_binary(lp, tie)
        if ref is None:
            assert out.status == INFEASIBLE, lp.dump()
            continue
        assert out.status == OPTIMAL, lp.dump()
        assert (out.objective, out.secondary or 0) == ref, lp.dump()
        assert all(v in (0, 1) for v in out.x)


def test_solve_binary_with_cached_system():
    rng = random.Random(23)
    for _ in range(100):
        lp, tie = random_binary(rng)
        system = BinarySystem(lp.rows, lp.n)
        a = solve_binary(lp, tie, system=system)
        b = solve_binary(lp, tie)
        assert a.status == b.status
        if a.status == OPTIMAL:
            assert (a.objective, a.secondary) == (b.objective, b.secondary)


def test_solve_binary_nonnegative_costs_give_zero():
    lp = LinearProgram([3, 0, 1])
    lp.add_row({0: 1, 1: 1}, LE, 1)
    out = solve_binary(lp)
    assert out.objective == 0
    assert out.x == [0, 0, 0]


def test_unknown_bounding_rejected():
    with pytest.raises(ValueError):
        solve_binary(LinearProgram([1]), bounding="magic")


def enumerating_pricer(columns):
    """Pricer that picks the most negative reduced cost among fixed columns."""

    def pricer(duals, excluded, weight):
        best = None
        for pattern, cost in columns:
            if pattern in excluded:
                continue
            rc = weight * cost - sum(duals.get(k, 0) for k in pattern)
            if best is None or rc < best[0]:
                best = (rc, Column(frozenset(pattern), cost))
        if best is None:
            return PricingResult(Fraction(0), None)
        return PricingResult(best[0], best[1])

    return pricer


def test_branch_and_price_uncoverable_row_is_infeasible():
    rows = [MasterRow("a", GE), MasterRow("b", GE)]
    res = branch_and_price(rows, enumerating_pricer([(frozenset({"a"}), 1)]), BPOptions(big_m=10))
    assert res.status == INFEASIBLE


def test_branch_and_price_covers_rows():
    rows = [MasterRow("a", GE), MasterRow("b", GE), MasterRow("o", EQ)]
    cols = [(frozenset({"a"}), 1), (frozenset({"b"}), 1), (frozenset({"a", "b"}), 3),
            (frozenset({"a", "o"}), 2), (frozenset({"o"}), 1)]
    res = branch_and_price(rows, enumerating_pricer(cols), BPOptions(big_m=10))
    assert res.status == OPTIMAL
    assert res.objective == 3
    covered = set().union(*(c.pattern for c, v in res.selected if v))
    assert covered == {"a", "b", "o"}


def test_branch_and_price_branches_on_fractional_master():
    # odd cycle cover: LP optimum 3/2, integer optimum 2
    rows = [MasterRow(k, GE) for k in "abc"]
    cols = [(frozenset(p), 1) for p in ("ab", "bc", "ca")]
    res = branch_and_price(rows, enumerating_pricer(cols), BPOptions(big_m=10))
    assert res.status == OPTIMAL
    assert res.objective == 2
    assert res.nodes > 1
