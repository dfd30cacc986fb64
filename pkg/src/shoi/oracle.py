"""Independent ground truth for the reasoner.

``brute_force_consistency`` searches for a finite model of bounded size.  The
search is posed as a 0/1 program over "element d is in concept C" and "(d, e)
is in role P" variables and handed to scipy's MILP solver; every model it
returns is re-checked by a direct evaluator of the semantics, so a
``Consistent`` answer never rests on floating point.

``full_master_solve`` enumerates every partition element of a decomposition
set, keeps those the pricing constraints admit, and solves the complete master
problem as an integer program.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .algebraic import DecompositionSet, PricingProblem
from .concepts import BOTTOM, TOP, All, And, Atom, Concept, Nominal, Not, Or, Role, RoleBox, Some, Tbox, closure
from .simplex import EQ, GE, LE

_MILP_OPTIONS = {"presolve": False, "mip_rel_gap": 0}


class OracleError(RuntimeError):
    pass


class OracleBudgetExceeded(OracleError):
    pass


# ---------------------------------------------------------------------------
# Finite interpretations


@dataclass
class FiniteInterpretation:
    size: int
    concepts: dict[str, frozenset] = field(default_factory=dict)
    roles: dict[str, frozenset] = field(default_factory=dict)
    nominals: dict[str, int] = field(default_factory=dict)

    @property
    def domain(self) -> range:
        return range(self.size)

    def role(self, r: Role) -> frozenset:
        pairs = self.roles.get(r.name, frozenset())
        if r.inverted:
            return frozenset((b, a) for a, b in pairs)
        return pairs

    def extension(self, c: Concept, memo: dict | None = None) -> frozenset:
        memo = {} if memo is None else memo
        if c in memo:
            return memo[c]
        t = type(c)
        dom = frozenset(self.domain)
        if c == TOP:
            out = dom
        elif c == BOTTOM:
            out = frozenset()
        elif t is Atom:
            out = self.concepts.get(c.name, frozenset())
        elif t is Nominal:
            if c.name not in self.nominals:
                raise OracleError(f"nominal {c.name} has no element")
            out = frozenset({self.nominals[c.name]})
        elif t is Not:
            out = dom - self.extension(c.arg, memo)
        elif t is And:
            out = dom
            for a in c.args:
                out &= self.extension(a, memo)
        elif t is Or:
            out = frozenset()
            for a in c.args:
                out |= self.extension(a, memo)
        elif t is Some:
            f = self.extension(c.filler, memo)
            out = frozenset(d for d, e in self.role(c.role) if e in f)
        elif t is All:
            f = self.extension(c.filler, memo)
            bad = {d for d, e in self.role(c.role) if e not in f}
            out = dom - bad
        else:
            raise TypeError(f"unknown concept {c!r}")
        memo[c] = out
        return out

    def violations(self, tbox: Tbox, rolebox: RoleBox) -> list[str]:
        """Every axiom of the internalized Tbox and role box the model breaks."""
        out = []
        memo: dict = {}
        dom = frozenset(self.domain)
        if self.extension(tbox.c_t, memo) != dom:
            out.append("internalized concept")
        for a, d in tbox.unfold.items():
            if not self.extension(a, memo) <= self.extension(d, memo):
                out.append(f"{a.key} -> {d.key}")
        for r, s in rolebox.direct_pairs():
            if not self.role(r) <= self.role(s):
                out.append(f"{r} below {s}")
        for p in rolebox.transitive:
            ext = self.roles.get(p, frozenset())
            for (a, b), (c, d) in itertools.product(ext, ext):
                if b == c and (a, d) not in ext:
                    out.append(f"{p} transitive")
                    break
        return out

    def is_model(self, tbox: Tbox, rolebox: RoleBox) -> bool:
        return not self.violations(tbox, rolebox)


@dataclass
class Consistent:
    model: FiniteInterpretation

    @property
    def size(self) -> int:
        return self.model.size


@dataclass
class NoModelUpTo:
    """No model with at most ``k`` elements; not a proof of inconsistency."""

    k: int


# ---------------------------------------------------------------------------
# Bounded model search


class _Program:
    def __init__(self) -> None:
        self.n = 0
        self.rows: list[tuple[dict, float, float]] = []
        self.names: list = []

    def var(self, name) -> int:
        self.n += 1
        self.names.append(name)
        return self.n - 1

    def row(self, coeffs: dict, lo: float, hi: float) -> None:
        self.rows.append((coeffs, lo, hi))

    def solve(self, time_limit: float):
        a = np.zeros((len(self.rows), self.n))
        lo = np.empty(len(self.rows))
        hi = np.empty(len(self.rows))
        for i, (coeffs, l, h) in enumerate(self.rows):
            for j, v in coeffs.items():
                a[i, j] += v
            lo[i], hi[i] = l, h
        cons = [LinearConstraint(a, lo, hi)] if self.rows else []
        res = milp(np.zeros(self.n), constraints=cons, integrality=np.ones(self.n), bounds=Bounds(0, 1),
                   options={**_MILP_OPTIONS, "time_limit": time_limit})
        if res.status == 1:
            raise OracleBudgetExceeded("model search time limit exceeded")
        if res.status != 0:
            return None
        return [int(round(v)) for v in res.x]


def _model_of_size(tbox: Tbox, rolebox: RoleBox, k: int, time_limit: float) -> FiniteInterpretation | None:
    concepts: set[Concept] = set(closure(tbox.c_t))
    for a, d in tbox.unfold.items():
        concepts |= closure(a) | closure(d)
    nominals = sorted({c.name for c in concepts if type(c) is Nominal} | set(tbox.nominals)
                      | set(tbox.individuals))
    atoms = sorted({c.name for c in concepts if type(c) is Atom})
    role_names = sorted(rolebox.names)
    dom = range(k)
    prog = _Program()
    rel = {(p, d, e): prog.var(("rel", p, d, e)) for p in role_names for d in dom for e in dom}
    nom = {(o, d): prog.var(("nom", o, d)) for o in nominals for d in dom}
    atom = {(a, d): prog.var(("atom", a, d)) for a in atoms for d in dom}

    def r(role: Role, d: int, e: int) -> int:
        return rel[(role.name, e, d)] if role.inverted else rel[(role.name, d, e)]

    for i, o in enumerate(nominals):
        prog.row({nom[(o, d)]: 1 for d in dom}, 1, 1)
        # symmetry: the i-th nominal sits on one of the first i + 1 elements
        for d in dom:
            if d > i:
                prog.row({nom[(o, d)]: 1}, 0, 0)

    one = prog.var("one")
    prog.row({one: 1}, 1, 1)
    value: dict[tuple[Concept, int], int] = {}

    def v(c: Concept, d: int) -> int:
        key = (c, d)
        if key in value:
            return value[key]
        t = type(c)
        if c == TOP:
            x = one
        elif c == BOTTOM:
            x = prog.var(("bottom", d))
            prog.row({x: 1}, 0, 0)
        elif t is Atom:
            x = atom[(c.name, d)]
        elif t is Nominal:
            x = nom[(c.name, d)]
        elif t is Not:
            y = v(c.arg, d)
            x = prog.var((c, d))
            prog.row({x: 1, y: 1}, 1, 1)
        elif t is And:
            ys = [v(a, d) for a in c.args]
            x = prog.var((c, d))
            for y in ys:
                prog.row({x: 1, y: -1}, -np.inf, 0)
            row = {x: 1}
            for y in ys:
                row[y] = row.get(y, 0) - 1
            prog.row(row, 1 - len(ys), np.inf)
        elif t is Or:
            ys = [v(a, d) for a in c.args]
            x = prog.var((c, d))
            for y in ys:
                prog.row({x: 1, y: -1}, 0, np.inf)
            row = {x: 1}
            for y in ys:
                row[y] = row.get(y, 0) - 1
            prog.row(row, -np.inf, 0)
        elif t in (Some, All):
            x = prog.var((c, d))
            aux = []
            for e in dom:
                re, fe = r(c.role, d, e), v(c.filler, e)
                p = prog.var(("pair", c, d, e))
                aux.append(p)
                if t is Some:  # p = re and fe
                    prog.row({p: 1, re: -1}, -np.inf, 0)
                    prog.row({p: 1, fe: -1}, -np.inf, 0)
                    prog.row({p: 1, re: -1, fe: -1}, -1, np.inf)
                else:  # p = re and not fe
                    prog.row({p: 1, re: -1}, -np.inf, 0)
                    prog.row({p: 1, fe: 1}, -np.inf, 1)
                    prog.row({p: 1, re: -1, fe: 1}, 0, np.inf)
            if t is Some:
                for p in aux:
                    prog.row({x: 1, p: -1}, 0, np.inf)
                row = {x: 1}
                for p in aux:
                    row[p] = -1
                prog.row(row, -np.inf, 0)
            else:
                for p in aux:
                    prog.row({x: 1, p: 1}, -np.inf, 1)
                row = {x: 1}
                for p in aux:
                    row[p] = 1
                prog.row(row, 1, np.inf)
        else:
            raise TypeError(f"unknown concept {c!r}")
        value[key] = x
        return x

    for d in dom:
        if tbox.c_t != TOP:
            prog.row({v(tbox.c_t, d): 1}, 1, 1)
        for a, c in tbox.unfold.items():
            prog.row({v(a, d): 1, v(c, d): -1}, -np.inf, 0)
    for sub, sup in rolebox.direct_pairs():
        for d in dom:
            for e in dom:
                prog.row({r(sub, d, e): 1, r(sup, d, e): -1}, -np.inf, 0)
    for p in sorted(rolebox.transitive):
        for d, e, f in itertools.product(dom, dom, dom):
            row: dict[int, int] = {}
            for j, c in ((rel[(p, d, e)], 1), (rel[(p, e, f)], 1), (rel[(p, d, f)], -1)):
                row[j] = row.get(j, 0) + c
            prog.row(row, -np.inf, 1)

    x = prog.solve(time_limit)
    if x is None:
        return None
    model = FiniteInterpretation(
        size=k,
        concepts={a: frozenset(d for d in dom if x[atom[(a, d)]]) for a in atoms},
        roles={p: frozenset((d, e) for d in dom for e in dom if x[rel[(p, d, e)]]) for p in role_names},
        nominals={o: next(d for d in dom if x[nom[(o, d)]]) for o in nominals},
    )
    bad = model.violations(tbox, rolebox)
    if bad:
        raise OracleError(f"solver returned a non-model of size {k}: {bad[0]}")
    return model


def brute_force_consistency(tbox: Tbox, rolebox: RoleBox, max_domain: int = 4,
                            time_limit: float = 60.0) -> Consistent | NoModelUpTo:
    """Search for a model with 1..max_domain elements."""
    for k in range(1, max_domain + 1):
        model = _model_of_size(tbox, rolebox, k, time_limit)
        if model is not None:
            return Consistent(model)
    return NoModelUpTo(max_domain)


# ---------------------------------------------------------------------------
# Exhaustive master problem


@dataclass
class MasterSolution:
    objective: int
    assignment: dict[frozenset, int]


class Infeasible:
    def __repr__(self) -> str:
        return "Infeasible"


INFEASIBLE = Infeasible()


def _pattern_cost(pp: PricingProblem, fixed: dict[int, int], time_limit: float) -> int | None:
    """Fewest names over 0/1 assignments of the PP rows with ``fixed`` values."""
    lp = pp.lp
    n = lp.n
    a = np.zeros((len(lp.rows), n))
    lo = np.full(len(lp.rows), -np.inf)
    hi = np.full(len(lp.rows), np.inf)
    for i, row in enumerate(lp.rows):
        for j, c in row.coeffs.items():
            a[i, j] = float(c)
        if row.rel in (LE, EQ):
            hi[i] = float(row.rhs)
        if row.rel in (GE, EQ):
            lo[i] = float(row.rhs)
    lb = np.zeros(n)
    ub = np.ones(n)
    for j, val in fixed.items():
        lb[j] = ub[j] = val
    cost = np.zeros(n)
    for j in pp.b.values():
        cost[j] = 1
    cons = [LinearConstraint(a, lo, hi)] if lp.rows else []
    res = milp(cost, constraints=cons, integrality=np.ones(n), bounds=Bounds(lb, ub),
               options={**_MILP_OPTIONS, "time_limit": time_limit})
    if res.status == 1:
        raise OracleBudgetExceeded("pricing enumeration time limit exceeded")
    if res.status != 0:
        return None
    x = [int(round(v)) for v in res.x]
    for row in lp.rows:
        lhs = sum(Fraction(c) * x[j] for j, c in row.coeffs.items())
        ok = lhs <= row.rhs if row.rel == LE else lhs >= row.rhs if row.rel == GE else lhs == row.rhs
        if not ok:
            raise OracleError(f"solver returned an assignment violating {row.name or row}")
    return sum(x[j] for j in pp.b.values())


def enumerate_columns(q: DecompositionSet, pp: PricingProblem, time_limit: float = 60.0) -> dict[frozenset, int]:
    """Every valid partition element with its cheapest cost."""
    if q.size > 12:
        raise OracleBudgetExceeded(f"|Q| = {q.size} is above the enumeration limit of 12")
    keys = q.row_keys()
    rvars = pp.r_exists + pp.r_nominal
    out = {}
    for mask in range(1, 2 ** len(keys)):
        fixed = {v: (mask >> i) & 1 for i, v in enumerate(rvars)}
        cost = _pattern_cost(pp, fixed, time_limit)
        if cost is not None:
            out[frozenset(k for i, k in enumerate(keys) if (mask >> i) & 1)] = cost
    return out


def full_master_solve(q: DecompositionSet, pp: PricingProblem,
                      time_limit: float = 60.0) -> MasterSolution | Infeasible:
    """Optimum of the master problem over all valid partition elements."""
    columns = enumerate_columns(q, pp, time_limit)
    ge_rows = [e.key for e in q.q_exists]
    eq_rows = [f"I.{o}" for o in q.q_nominals]
    if not ge_rows and not eq_rows:
        return MasterSolution(0, {})
    pats = sorted(columns, key=lambda p: (len(p), sorted(p)))
    if not pats:
        return INFEASIBLE
    rows = ge_rows + eq_rows
    a = np.array([[1.0 if key in p else 0.0 for p in pats] for key in rows])
    lo = np.array([1.0] * len(rows))
    hi = np.array([np.inf] * len(ge_rows) + [1.0] * len(eq_rows))
    cost = np.array([float(columns[p]) for p in pats])
    # no optimum needs a column more than |rows| times
    res = milp(cost, constraints=[LinearConstraint(a, lo, hi)], integrality=np.ones(len(pats)),
               bounds=Bounds(0, len(rows)), options={**_MILP_OPTIONS, "time_limit": time_limit})
    if res.status == 1:
        raise OracleBudgetExceeded("master enumeration time limit exceeded")
    if res.status != 0:
        return INFEASIBLE
    x = [int(round(v)) for v in res.x]
    for i, key in enumerate(rows):
        cover = sum(x[j] for j, p in enumerate(pats) if key in p)
        if cover < 1 or (i >= len(ge_rows) and cover != 1):
            raise OracleError(f"solver returned a master solution violating row {key}")
    assignment = {p: x[j] for j, p in enumerate(pats) if x[j]}
    return MasterSolution(sum(columns[p] * n for p, n in assignment.items()), assignment)
