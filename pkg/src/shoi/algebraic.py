"""Algebraic reasoning for one completion-graph node.

A node's existential and universal restrictions plus the nominals they
mention form the decomposition set Q.  The master problem selects partition
elements (columns) so that every existential element is covered and every
nominal is placed exactly once; new columns come from a 0/1 pricing problem
whose objective is built from the master duals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable

from .concepts import (
    BOTTOM,
    All,
    And,
    Atom,
    Concept,
    Nominal,
    Not,
    Or,
    Role,
    RoleBox,
    Some,
    Tbox,
    closure,
    is_name,
    nnf,
)
from .simplex import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    BinarySystem,
    BPOptions,
    BPResult,
    Column,
    LinearProgram,
    MasterRow,
    PricingResult,
    branch_and_price,
    solve_binary,
)


@dataclass(frozen=True, order=True)
class FreshName:
    """Stand-in name for a complex qualification."""

    index: int

    def __str__(self) -> str:
        return f"F{self.index}"


@dataclass(frozen=True)
class ReuseName:
    """Synthetic qualification standing for an existing neighbour."""

    node: Hashable
    label: str

    def __str__(self) -> str:
        return f"X({self.label})"


QualName = Concept | FreshName | ReuseName


def _qual_key(q) -> tuple:
    if isinstance(q, ReuseName):
        return (2, q.label)
    if isinstance(q, FreshName):
        return (1, f"{q.index:08d}")
    return (0, q.name if is_name(q) else q.key)


def qual_str(q) -> str:
    if is_name(q):
        return q.name
    return str(q)


@dataclass(frozen=True)
class QElem:
    """An existential element R_q; reuse elements carry the edge role set."""

    roles: tuple[Role, ...]
    qual: object
    edge_roles: frozenset = frozenset()
    reuse_of: Hashable = None

    @property
    def key(self) -> str:
        rs = ",".join(str(r) for r in self.roles)
        return f"{rs}.{qual_str(self.qual)}"

    @property
    def all_roles(self) -> frozenset:
        return self.edge_roles or frozenset(self.roles)


@dataclass
class DecompositionSet:
    q_exists: list[QElem] = field(default_factory=list)
    q_forall: list[tuple[Role, object]] = field(default_factory=list)
    q_nominals: list[str] = field(default_factory=list)
    table: dict = field(default_factory=dict)
    reuse: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.q_exists) + len(self.q_forall) + len(self.q_nominals)

    def is_empty(self) -> bool:
        return self.size == 0

    def row_keys(self) -> list[str]:
        return [e.key for e in self.q_exists] + [f"I.{o}" for o in self.q_nominals]

    def describe(self) -> dict:
        return {
            "Q_exists": [e.key for e in self.q_exists],
            "Q_forall": [f"{r}.{qual_str(q)}" for r, q in self.q_forall],
            "Q_o": [f"I.{o}" for o in self.q_nominals],
        }


def _minimal_roles(roles: Iterable[Role], rolebox: RoleBox) -> tuple[Role, ...]:
    roles = sorted(set(roles))
    out = []
    for r in roles:
        if not any(s != r and rolebox.subsumes_star(s, r) and not rolebox.subsumes_star(r, s) for s in roles):
            out.append(r)
    return tuple(out)


def _natural(name: str) -> tuple:
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name))


def build_decomposition(
    label: Iterable[Concept],
    back_edges: dict | None = None,
    rolebox: RoleBox | None = None,
    node_names: dict | None = None,
) -> DecompositionSet:
    """Collect Q∃, Q∀ and Qo from a saturated label and the B(x) records."""
    label = list(label)
    rolebox = rolebox or RoleBox()
    ds = DecompositionSet()
    fresh: dict[Concept, FreshName] = {}

    def qualify(c: Concept):
        if is_name(c):
            return c
        if c not in fresh:
            fresh[c] = FreshName(len(fresh) + 1)
            ds.table[fresh[c]] = c
        return fresh[c]

    exists = [c for c in label if type(c) is Some]
    foralls = [c for c in label if type(c) is All]
    for c in sorted(exists, key=lambda c: (_qual_key(c.filler if is_name(c.filler) else c.filler), c.role.key)):
        ds.q_exists.append(QElem((c.role,), qualify(c.filler)))
    ds.q_exists.sort(key=lambda e: (_qual_key(e.qual), [r.key for r in e.roles]))
    for node, roles in sorted((back_edges or {}).items(), key=lambda kv: str(kv[0])):
        name = (node_names or {}).get(node, str(node))
        x = ReuseName(node, name)
        ds.reuse[x] = node
        ds.q_exists.append(QElem(_minimal_roles(roles, rolebox), x, frozenset(roles), node))
    for c in sorted(foralls):
        ds.q_forall.append((c.role, qualify(c.filler)))
    noms: set[str] = set()
    for c in exists + foralls:
        noms |= {d.name for d in closure(c.filler) if type(d) is Nominal}
    ds.q_nominals = sorted(noms, key=_natural)
    return ds


# ---------------------------------------------------------------------------
# Pricing problem


@dataclass
class PricingProblem:
    lp: LinearProgram
    q: DecompositionSet
    r_exists: list[int]
    r_nominal: list[int]
    b: dict
    r_top: dict
    tie_break: list
    system: BinarySystem | None = field(default=None, repr=False, compare=False)

    @property
    def names(self) -> list:
        return list(self.b)

    def constraint_rows(self) -> list:
        return self.lp.rows


@dataclass
class NodeContext:
    """What the tableau knows about existing nodes the PP may refer to."""

    reuse_labels: dict = field(default_factory=dict)
    nominal_labels: dict = field(default_factory=dict)
    label: set = field(default_factory=set)


def build_pp(
    q: DecompositionSet,
    tbox: Tbox | None = None,
    rolebox: RoleBox | None = None,
    context: NodeContext | None = None,
) -> PricingProblem:
    rolebox = rolebox or RoleBox()
    context = context or NodeContext()
    lp = LinearProgram([])

    def var(name: str) -> int:
        return lp.add_var(0, name)

    r_exists = [var(f"r[{e.key}]") for e in q.q_exists]
    r_nominal = [var(f"r[I.{o}]") for o in q.q_nominals]

    names: dict = {}

    def add_name(n) -> None:
        if n not in names:
            names[n] = None

    def name_parts(c: Concept) -> list[tuple[Concept, bool]] | None:
        """Literals of a conjunction/disjunction of names, else None."""
        if is_name(c):
            return [(c, True)]
        if type(c) is Not and is_name(c.arg):
            return [(c.arg, False)]
        return None

    for e in q.q_exists:
        add_name(e.qual)
    forall_targets = []
    for role, qual in q.q_forall:
        c = q.table.get(qual, qual)
        if type(c) in (Or, And) and all(is_name(a) for a in c.args):
            for a in c.args:
                add_name(a)
            forall_targets.append((role, type(c), list(c.args)))
        else:
            add_name(qual)
            forall_targets.append((role, None, [qual]))
    for o in q.q_nominals:
        add_name(Nominal(o))
    # fresh-name definitions over names
    fresh_defs = []
    for fname, c in q.table.items():
        if fname not in names:
            continue
        if type(c) in (And, Or):
            lits = []
            for a in c.args:
                p = name_parts(a)
                if p is None:
                    lits = None
                    break
                lits += p
            if lits is not None:
                fresh_defs.append((fname, type(c), lits))
                for n, pos in lits:
                    if pos:
                        add_name(n)
        elif type(c) is Not and is_name(c.arg):
            fresh_defs.append((fname, And, [(c.arg, False)]))

    axioms = tbox.name_axioms if tbox else []
    changed = True
    while changed:
        changed = False
        for ax in axioms:
            if ax.conjunctive:
                if ax.rhs and all(a in names for a in ax.lhs) and ax.rhs[0] not in names:
                    add_name(ax.rhs[0])
                    changed = True
            elif ax.lhs[0] in names and any(b not in names for b in ax.rhs):
                for b in ax.rhs:
                    add_name(b)
                changed = True

    b = {n: lp.add_var(0, f"b[{qual_str(n)}]") for n in names}

    # r_⊤ variables for roles lying below some universal restriction
    forall_roles = [r for r, _ in q.q_forall]
    elem_roles = {r for e in q.q_exists for r in e.roles}
    relevant: set[Role] = set(forall_roles)
    for t in elem_roles:
        for s in forall_roles:
            if rolebox.subsumes_star(t, s):
                relevant |= {u for u in rolebox.supers(t) if rolebox.subsumes_star(u, s)}
    r_top = {r: lp.add_var(0, f"rtop[{r}]") for r in sorted(relevant)}

    for e, rv in zip(q.q_exists, r_exists):
        lp.add_row({rv: 1, b[e.qual]: -1}, LE, 0, f"exists {e.key}")
    for o, rv in zip(q.q_nominals, r_nominal):
        lp.add_row({rv: 1, b[Nominal(o)]: -1}, EQ, 0, f"nominal {o}")
    for e, rv in zip(q.q_exists, r_exists):
        for role in e.roles:
            if role in r_top:
                lp.add_row({rv: 1, r_top[role]: -1}, LE, 0, f"role {e.key} {role}")
    for role, kind, targets in forall_targets:
        if kind is And:
            for t in targets:
                lp.add_row({r_top[role]: 1, b[t]: -1}, LE, 0, f"forall {role}")
        else:
            row = {r_top[role]: 1}
            for t in targets:
                row[b[t]] = row.get(b[t], 0) - 1
            lp.add_row(row, LE, 0, f"forall {role}")
    for sub, sup in sorted(rolebox.direct_pairs()):
        if sub in r_top and sup in r_top and sub != sup:
            lp.add_row({r_top[sub]: 1, r_top[sup]: -1}, LE, 0, f"hierarchy {sub} {sup}")

    for fname, kind, lits in fresh_defs:
        if kind is And:
            for n, pos in lits:
                if pos:
                    lp.add_row({b[fname]: 1, b[n]: -1}, LE, 0, f"def {fname}")
                elif n in b:
                    lp.add_row({b[fname]: 1, b[n]: 1}, LE, 1, f"def {fname}")
        else:
            if all(pos for _, pos in lits):
                row = {b[fname]: 1}
                for n, _ in lits:
                    row[b[n]] = row.get(b[n], 0) - 1
                lp.add_row(row, LE, 0, f"def {fname}")

    for ax in axioms:
        if ax.conjunctive:
            if not all(a in b for a in ax.lhs):
                continue
            row = {}
            for a in ax.lhs:
                row[b[a]] = row.get(b[a], 0) + 1
            if ax.rhs:
                if ax.rhs[0] in ax.lhs:
                    continue
                row[b[ax.rhs[0]]] = row.get(b[ax.rhs[0]], 0) - 1
            lp.add_row(row, LE, len(ax.lhs) - 1, "subsumption")
        elif ax.lhs[0] in b:
            row = {b[ax.lhs[0]]: 1}
            for c in ax.rhs:
                row[b[c]] = row.get(b[c], 0) - 1
            if row.get(b[ax.lhs[0]]) == 1:
                lp.add_row(row, LE, 0, "disjunction")

    groups = tbox.disjoint_groups if tbox else []
    seen_groups = set()
    for g in groups:
        members = [m for m in dict.fromkeys(g) if m in b]
        if len(members) >= 2 and frozenset(members) not in seen_groups:
            seen_groups.add(frozenset(members))
            lp.add_row({b[m]: 1 for m in members}, LE, 1, "disjoint")

    # knowledge about existing nodes
    plain = [n for n in b if isinstance(n, Concept)]

    def incompatible(y: Concept, lab: set) -> bool:
        if Not(y) in lab:
            return True
        for g in groups:
            if y in g and any(z != y and z in lab for z in g):
                return True
        return False

    reuse_names = [x for x in q.reuse if x in b]
    for x in reuse_names:
        lab = context.reuse_labels.get(q.reuse[x], set())
        for y in plain:
            if y in lab:
                lp.add_row({b[x]: 1, b[y]: -1}, LE, 0, f"reuse {x} has {qual_str(y)}")
            elif incompatible(y, lab):
                lp.add_row({b[x]: 1, b[y]: 1}, LE, 1, f"reuse {x} excludes {qual_str(y)}")
    if len(reuse_names) >= 2:
        lp.add_row({b[x]: 1 for x in reuse_names}, LE, 1, "distinct neighbours")
    for o in q.q_nominals:
        lab = context.nominal_labels.get(o)
        if not lab:
            continue
        bo = b[Nominal(o)]
        for y in plain:
            if y == Nominal(o):
                continue
            if y in lab:
                lp.add_row({bo: 1, b[y]: -1}, LE, 0, f"nominal {o} has {qual_str(y)}")
            elif incompatible(y, lab):
                lp.add_row({bo: 1, b[y]: 1}, LE, 1, f"nominal {o} excludes {qual_str(y)}")

    # a universal restriction on the new neighbour that reaches back to x must
    # not contradict the label of x
    def clashes_at_x(c: Concept) -> bool:
        if c == BOTTOM or nnf(Not(c)) in context.label:
            return True
        return is_name(c) and incompatible(c, context.label)

    def foralls_of(n) -> list[All]:
        if isinstance(n, FreshName):
            c = q.table[n]
            parts = c.args if type(c) is And else (c,)
            return [a for a in parts if type(a) is All]
        if type(n) is Nominal:
            return [a for a in context.nominal_labels.get(n.name, ()) if type(a) is All]
        return []

    if context.label:
        for n in sorted(b, key=_qual_key):
            for a in sorted(foralls_of(n)):
                if not clashes_at_x(a.filler):
                    continue
                for e, rv in zip(q.q_exists, r_exists):
                    if any(rolebox.subsumes_star(u.inv(), a.role) for u in e.all_roles):
                        lp.add_row({rv: 1, b[n]: 1}, LE, 1, f"back {e.key} {a.key}")

    rvars = r_exists + r_nominal
    k = len(rvars)
    tie = [0] * lp.n
    for i, v in enumerate(rvars):
        tie[v] = -(2 ** (k - 1 - i))
    return PricingProblem(lp, q, r_exists, r_nominal, b, r_top, tie)


def price(pp: PricingProblem, duals: dict, excluded: set = frozenset(), cost_weight: int = 1) -> PricingResult:
    """Solve the pricing problem for the given master duals."""
    q = pp.q
    keys = q.row_keys()
    rvars = pp.r_exists + pp.r_nominal
    obj = [0] * pp.lp.n
    for v in pp.b.values():
        obj[v] = cost_weight
    for key, v in zip(keys, rvars):
        obj[v] = -duals.get(key, 0)
    lp = LinearProgram(obj, list(pp.lp.rows), names=list(pp.lp.names))
    for pattern in excluded:
        row = {}
        inside = 0
        for key, v in zip(keys, rvars):
            if key in pattern:
                row[v] = -1
                inside += 1
            else:
                row[v] = 1
        lp.add_row(row, GE, 1 - inside, "exclude")
    system = None
    if not excluded:
        if pp.system is None:
            pp.system = BinarySystem(pp.lp.rows, pp.lp.n)
        system = pp.system
    out = solve_binary(lp, pp.tie_break, system=system)
    if out.status != OPTIMAL:
        return PricingResult(Fraction(0), None)
    x = out.x
    pattern = frozenset(key for key, v in zip(keys, rvars) if x[v])
    chosen = [n for n, v in pp.b.items() if x[v]]
    cost = len(chosen)
    if not pattern or out.objective >= 0:
        # the zero vector is feasible and optimal: no improving column
        return PricingResult(out.objective, None)
    col = Column(pattern, cost, {"names": chosen, "values": {pp.lp.names[j]: x[j] for j in range(lp.n) if x[j]}})
    return PricingResult(out.objective, col)


def column_from_pp(pp: PricingProblem, values: dict[str, int]) -> Column:
    """Build a column from a PP assignment given by variable name."""
    keys = pp.q.row_keys()
    rvars = pp.r_exists + pp.r_nominal
    pattern = frozenset(k for k, v in zip(keys, rvars) if values.get(pp.lp.names[v]))
    chosen = [n for n, v in pp.b.items() if values.get(pp.lp.names[v])]
    return Column(pattern, len(chosen), {"names": chosen, "values": dict(values)})


# ---------------------------------------------------------------------------
# Node solve


@dataclass(frozen=True)
class SolutionTuple:
    roles: frozenset
    concepts: frozenset
    n: int = 1
    reuse: frozenset = frozenset()

    def describe(self, node_label=str) -> str:
        rs = "{" + ",".join(sorted(str(r) for r in self.roles)) + "}"
        cs = "{" + ",".join(sorted(c.name if is_name(c) else c.key for c in self.concepts)) + "}"
        s = f"<{rs},{cs},{self.n}"
        if self.reuse:
            s += ",{" + ",".join(sorted(node_label(v) for v in self.reuse)) + "}"
        return s + ">"


@dataclass
class NodeOptions:
    paper_m: int | None = None
    max_bp_nodes: int = 10_000
    max_iterations: int = 100_000
    warm_start: bool = True
    deadline: float | None = None


@dataclass
class NodeResult:
    status: str
    tuples: list[SolutionTuple]
    objective: Fraction | None
    bp: BPResult
    big_m: int


def default_big_m(q: DecompositionSet, pp: PricingProblem) -> int:
    if q.size <= 4:
        return 10
    return 2 * (len(pp.b) + q.size)


def master_rows(q: DecompositionSet) -> list[MasterRow]:
    # nominal rows first: with Bland's rule this fixes which degenerate vertex is reported
    rows = [MasterRow(f"I.{o}", EQ) for o in q.q_nominals]
    rows += [MasterRow(e.key, GE) for e in q.q_exists]
    return rows


def tuple_from_column(q: DecompositionSet, col: Column, n: int) -> SolutionTuple:
    elems = {e.key: e for e in q.q_exists}
    roles: set[Role] = set()
    reuse = set()
    for key in col.pattern:
        e = elems.get(key)
        if e is None:
            continue
        roles |= e.all_roles
        if e.reuse_of is not None:
            reuse.add(e.reuse_of)
    concepts = set()
    for name in col.payload["names"]:
        if isinstance(name, ReuseName):
            continue
        if isinstance(name, FreshName):
            concepts.add(q.table[name])
        else:
            concepts.add(name)
    if any(type(c) is Nominal for c in concepts):
        n = 1
    return SolutionTuple(frozenset(roles), frozenset(concepts), n, frozenset(reuse))


def solve_node(
    q: DecompositionSet,
    pp: PricingProblem,
    options: NodeOptions | None = None,
    on_event=None,
) -> NodeResult:
    opts = options or NodeOptions()
    big_m = opts.paper_m if opts.paper_m is not None else default_big_m(q, pp)

    def pricer(duals, excluded, weight):
        return price(pp, duals, excluded, weight)

    bp = branch_and_price(
        master_rows(q),
        pricer,
        BPOptions(big_m=big_m, max_nodes=opts.max_bp_nodes, max_iterations=opts.max_iterations,
                  warm_start=opts.warm_start, deadline=opts.deadline),
        on_event=on_event,
    )
    if bp.status == INFEASIBLE:
        return NodeResult(INFEASIBLE, [], None, bp, big_m)
    tuples = [tuple_from_column(q, col, int(v)) for col, v in bp.selected]
    return NodeResult(OPTIMAL, tuples, bp.objective, bp, big_m)
