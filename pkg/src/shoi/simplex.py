"""Exact rational LP/ILP machinery.

``solve_lp`` is a sparse tableau primal simplex over ``fractions.Fraction``
with Bland's rule, a two-phase start, optional lexicographic secondary
objective and dual extraction.  Every optimal outcome is certified on the
spot: primal feasibility, dual feasibility and equal objective values are
recomputed from the original rows.

``solve_binary`` is a depth-first branch-and-bound for 0/1 programs and
``branch_and_price`` drives column generation with branching on master
variables.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Optional

LE, GE, EQ = "<=", ">=", "="

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"

# Counters inspected by the test-suite.
STATS = {"lp_solves": 0, "optimal": 0, "certified": 0, "duality_checks": 0, "pivots": 0}


class BudgetExceeded(RuntimeError):
    pass


class CertificateError(AssertionError):
    pass


def _norm(v):
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


def _div(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return _norm(Fraction(a) / b)


@dataclass
class Row:
    coeffs: dict[int, Fraction | int]
    rel: str
    rhs: Fraction | int
    name: str = ""


@dataclass
class LinearProgram:
    """min c·x subject to rows, lower ≤ x ≤ upper (upper may be None)."""

    objective: list
    rows: list[Row] = field(default_factory=list)
    lower: list | None = None
    upper: list | None = None
    integer: list[bool] | None = None
    names: list[str] | None = None
    secondary: list | None = None

    def __post_init__(self) -> None:
        n = len(self.objective)
        if self.lower is None:
            self.lower = [0] * n
        if self.upper is None:
            self.upper = [None] * n
        if self.integer is None:
            self.integer = [False] * n
        if self.names is None:
            self.names = [f"x{j}" for j in range(n)]

    @property
    def n(self) -> int:
        return len(self.objective)

    def add_var(self, cost=0, name: str | None = None, lower=0, upper=None, integer=False, secondary=0) -> int:
        j = len(self.objective)
        self.objective.append(cost)
        self.lower.append(lower)
        self.upper.append(upper)
        self.integer.append(integer)
        self.names.append(name or f"x{j}")
        if self.secondary is not None or secondary:
            if self.secondary is None:
                self.secondary = [0] * j
            self.secondary.append(secondary)
        return j

    def add_row(self, coeffs: dict, rel: str, rhs, name: str = "") -> int:
        if rel not in (LE, GE, EQ):
            raise ValueError(f"bad relation {rel!r}")
        self.rows.append(Row({j: v for j, v in coeffs.items() if v != 0}, rel, rhs, name))
        return len(self.rows) - 1

    def dump(self) -> str:
        """Plain-text listing: one row per line (relation, rhs, coefficient pairs)."""
        lines = ["min " + " ".join(f"{self.names[j]}:{v}" for j, v in enumerate(self.objective) if v)]
        for r in self.rows:
            pairs = " ".join(f"{self.names[j]}:{v}" for j, v in sorted(r.coeffs.items()))
            lines.append(f"{r.rel} {r.rhs} {pairs}" + (f"  # {r.name}" if r.name else ""))
        for j in range(self.n):
            lo, hi = self.lower[j], self.upper[j]
            if lo != 0 or hi is not None or self.integer[j]:
                kind = " int" if self.integer[j] else ""
                lines.append(f"bounds {self.names[j]} {lo} {'inf' if hi is None else hi}{kind}")
        return "\n".join(lines)


@dataclass
class LpOutcome:
    status: str
    objective: Fraction | None = None
    x: list | None = None
    duals: list | None = None
    basis: list | None = None
    secondary: Fraction | None = None
    pivots: int = 0
    alt_duals: list | None = None


class _Tableau:
    """Sparse tableau; rows are dicts column -> value."""

    def __init__(self, ncols: int) -> None:
        self.rows: list[dict] = []
        self.rhs: list = []
        self.basis: list[int] = []
        self.col_rows: list[set] = [set() for _ in range(ncols)]
        self.obj: list[dict] = []
        self.obj_val: list = []

    def add_row(self, coeffs: dict, rhs, basic: int) -> None:
        i = len(self.rows)
        self.rows.append(dict(coeffs))
        self.rhs.append(rhs)
        self.basis.append(basic)
        for j in coeffs:
            self.col_rows[j].add(i)

    def set_objectives(self, costs: list[list]) -> None:
        """Install objective rows as reduced costs for the current basis."""
        self.obj = []
        self.obj_val = []
        for c in costs:
            d = {j: v for j, v in enumerate(c) if v != 0}
            val = 0
            for i, b in enumerate(self.basis):
                cb = c[b]
                if cb == 0:
                    continue
                for j, v in self.rows[i].items():
                    nv = _norm(d.get(j, 0) - cb * v)
                    if nv == 0:
                        d.pop(j, None)
                    else:
                        d[j] = nv
                val = _norm(val - cb * self.rhs[i])
            self.obj.append(d)
            self.obj_val.append(val)

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        piv = row[j]
        if piv != 1:
            for k in row:
                row[k] = _div(row[k], piv)
            self.rhs[r] = _div(self.rhs[r], piv)
        prhs = self.rhs[r]
        for i in list(self.col_rows[j]):
            if i == r:
                continue
            other = self.rows[i]
            f = other[j]
            for k, v in row.items():
                nv = _norm(other.get(k, 0) - f * v)
                if nv == 0:
                    if k in other:
                        del other[k]
                        self.col_rows[k].discard(i)
                else:
                    if k not in other:
                        self.col_rows[k].add(i)
                    other[k] = nv
            if prhs != 0:
                self.rhs[i] = _norm(self.rhs[i] - f * prhs)
        for t, d in enumerate(self.obj):
            f = d.get(j)
            if f is None:
                continue
            for k, v in row.items():
                nv = _norm(d.get(k, 0) - f * v)
                if nv == 0:
                    d.pop(k, None)
                else:
                    d[k] = nv
            self.obj_val[t] = _norm(self.obj_val[t] - f * prhs)
        self.basis[r] = j

    def entering(self, allowed: Callable[[int], bool]) -> Optional[int]:
        """Bland: lowest-index column whose reduced cost is lexicographically negative."""
        best = None
        primary = self.obj[0]
        for j, v in primary.items():
            if v < 0 and (best is None or j < best) and allowed(j):
                best = j
        for t in range(1, len(self.obj)):
            d = self.obj[t]
            for j, v in d.items():
                if v < 0 and (best is None or j < best) and allowed(j):
                    if all(self.obj[s].get(j, 0) == 0 for s in range(t)):
                        best = j
        return best

    def leaving(self, j: int) -> Optional[int]:
        best = None
        best_ratio = None
        for i in self.col_rows[j]:
            a = self.rows[i][j]
            if a <= 0:
                continue
            ratio = _div(self.rhs[i], a)
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[i] < self.basis[best])
            ):
                best, best_ratio = i, ratio
        return best


def _simplex(tab: _Tableau, allowed, limit: int, check_cycles: bool) -> tuple[str, int]:
    seen = set()
    pivots = 0
    while True:
        if check_cycles:
            sig = frozenset(tab.basis)
            if sig in seen:
                raise CertificateError("basis repeated under Bland's rule")
            seen.add(sig)
        j = tab.entering(allowed)
        if j is None:
            return OPTIMAL, pivots
        r = tab.leaving(j)
        if r is None:
            return UNBOUNDED, pivots
        tab.pivot(r, j)
        pivots += 1
        STATS["pivots"] += 1
        if pivots > limit:
            raise BudgetExceeded("simplex pivot limit exceeded")


def _evict_degenerate(tab: _Tableau, cols: set, is_art) -> int:
    """Swap zero-level basic ``cols`` for other columns, keeping optimality.

    Dual ratio test on the basic row: the entering column minimises
    d_k / |a_k| among entries that keep every reduced cost non-negative.
    """
    pivots = 0
    d = tab.obj[0]
    for i in range(len(tab.rows)):
        if tab.basis[i] not in cols or tab.rhs[i] != 0:
            continue
        best = None
        bound = None
        for k, a in sorted(tab.rows[i].items()):
            if is_art(k) or k == tab.basis[i] or a == 0:
                continue
            dk = d.get(k, 0)
            if a > 0 and dk != 0:
                continue
            key = _div(dk, abs(a))
            if bound is None or key < bound:
                bound = key
            if k not in cols and (best is None or key < best[0]):
                best = (key, k)
        if best is not None and best[0] > bound:
            best = None
        if best is not None:
            tab.pivot(i, best[1])
            pivots += 1
    return pivots


def solve_lp(
    lp: LinearProgram,
    warm_basis: Iterable | None = None,
    check_cycles: bool = True,
    pivot_limit: int = 1_000_000,
    evict: Iterable[int] = (),
) -> LpOutcome:
    """Solve ``lp`` exactly; integrality marks are ignored.

    ``warm_basis`` is a list of basis labels from an earlier outcome of an LP
    with the same rows (columns may have been appended).
    """
    STATS["lp_solves"] += 1
    n = lp.n
    lower, upper = lp.lower, lp.upper
    for j in range(n):
        if upper[j] is not None and upper[j] < lower[j]:
            return LpOutcome(INFEASIBLE)

    fixed = {j: lower[j] for j in range(n) if upper[j] is not None and upper[j] == lower[j]}
    free = [j for j in range(n) if j not in fixed]
    pos = {j: k for k, j in enumerate(free)}

    # transformed rows: x = lower + x', x' >= 0
    trows: list[tuple[dict, str, object, int, int]] = []  # coeffs, rel, rhs, sign, original row (-1 for bound)
    for i, row in enumerate(lp.rows):
        rhs = row.rhs
        coeffs = {}
        for j, v in row.coeffs.items():
            if j in fixed:
                rhs = rhs - v * fixed[j]
            else:
                rhs = rhs - v * lower[j]
                coeffs[pos[j]] = v
        trows.append((coeffs, row.rel, _norm(Fraction(rhs)), 1, i))
    for j in free:
        if upper[j] is not None:
            trows.append(({pos[j]: 1}, LE, _norm(Fraction(upper[j] - lower[j])), 1, -1 - j))
    const = sum((lp.objective[j] * (fixed[j] if j in fixed else lower[j]) for j in range(n)), 0)
    const2 = 0
    if lp.secondary is not None:
        const2 = sum((lp.secondary[j] * (fixed[j] if j in fixed else lower[j]) for j in range(n)), 0)

    norm_rows = []
    for coeffs, rel, rhs, sign, orig in trows:
        if rhs < 0:
            coeffs = {k: -v for k, v in coeffs.items()}
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
            sign = -1
        norm_rows.append((coeffs, rel, rhs, sign, orig))

    nf = len(free)
    m = len(norm_rows)
    # column layout: structural [0, nf), slack/surplus [nf, nf+m), artificial [nf+m, nf+2m)
    slack_of = [None] * m
    art_of = [None] * m
    ncols = nf + 2 * m
    col_count: dict[int, int] = {}
    for coeffs, *_ in norm_rows:
        for k in coeffs:
            col_count[k] = col_count.get(k, 0) + 1

    tab = _Tableau(ncols)
    needs_phase1 = []
    used_crash = set()
    for i, (coeffs, rel, rhs, sign, orig) in enumerate(norm_rows):
        row = dict(coeffs)
        if rel == LE:
            slack_of[i] = nf + i
            row[nf + i] = 1
            tab.add_row(row, rhs, nf + i)
            continue
        if rel == GE:
            slack_of[i] = nf + i
            row[nf + i] = -1
        art_of[i] = nf + m + i
        row[nf + m + i] = 1
        crash = None
        for k in sorted(coeffs):
            if col_count[k] == 1 and coeffs[k] > 0 and k not in used_crash:
                crash = k
                break
        if crash is not None:
            used_crash.add(crash)
            tab.add_row(row, rhs, crash)
            r = len(tab.rows) - 1
            if coeffs[crash] != 1:
                tab.pivot(r, crash)
        else:
            tab.add_row(row, rhs, nf + m + i)
            needs_phase1.append(i)

    is_art = lambda j: j >= nf + m  # noqa: E731

    # optional warm start
    if warm_basis is not None:
        label_to_col = {}
        for j in free:
            label_to_col[("x", j)] = pos[j]
        for i, (_, _, _, _, orig) in enumerate(norm_rows):
            if slack_of[i] is not None:
                label_to_col[("s", orig)] = slack_of[i]
            if art_of[i] is not None:
                label_to_col[("a", orig)] = art_of[i]
        wanted = [label_to_col[b] for b in warm_basis if b in label_to_col]
        wanted_set = set(wanted)
        for col in wanted:
            if col in tab.basis:
                continue
            target = None
            for i in sorted(tab.col_rows[col]):
                if tab.basis[i] not in wanted_set and tab.rows[i][col] != 0:
                    target = i
                    break
            if target is not None:
                tab.pivot(target, col)
        if any(v < 0 for v in tab.rhs):
            return solve_lp(lp, None, check_cycles, pivot_limit)

    total_pivots = 0
    art_basic = [i for i, b in enumerate(tab.basis) if is_art(b)]
    if art_basic:
        phase1_cost = [0] * ncols
        for i in range(m):
            if art_of[i] is not None:
                phase1_cost[art_of[i]] = 1
        tab.set_objectives([phase1_cost])
        status, p = _simplex(tab, lambda j: True, pivot_limit, check_cycles)
        total_pivots += p
        if tab.obj_val[0] != 0:
            return LpOutcome(INFEASIBLE, pivots=total_pivots)
        # drive zero-level artificials out where possible
        for i, b in enumerate(tab.basis):
            if not is_art(b):
                continue
            for k in sorted(tab.rows[i]):
                if not is_art(k) and tab.rows[i][k] != 0:
                    tab.pivot(i, k)
                    total_pivots += 1
                    break

    cost = [0] * ncols
    for j in free:
        cost[pos[j]] = lp.objective[j]
    objectives = [cost]
    if lp.secondary is not None:
        cost2 = [0] * ncols
        for j in free:
            cost2[pos[j]] = lp.secondary[j]
        objectives.append(cost2)
    tab.set_objectives(objectives)
    status, p = _simplex(tab, lambda j: not is_art(j), pivot_limit, check_cycles)
    total_pivots += p
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, pivots=total_pivots)

    xprime = [0] * ncols
    for i, b in enumerate(tab.basis):
        xprime[b] = tab.rhs[i]
    x = []
    for j in range(n):
        if j in fixed:
            x.append(_norm(Fraction(fixed[j])))
        else:
            x.append(_norm(lower[j] + xprime[pos[j]]))

    def read_duals():
        # duals of the transformed rows, read from the unit columns
        d = tab.obj[0]
        ydash = []
        for i in range(m):
            col = slack_of[i] if norm_rows[i][1] == LE else art_of[i]
            ydash.append(_norm(-d.get(col, 0)))
        duals = [0] * len(lp.rows)
        for i, (_, _, _, sign, orig) in enumerate(norm_rows):
            if orig >= 0:
                duals[orig] = _norm(sign * ydash[i])
        return ydash, duals

    ydash, duals = read_duals()
    objective = _norm(Fraction(const) - tab.obj_val[0])
    sec = None
    if lp.secondary is not None:
        sec = _norm(Fraction(const2) - tab.obj_val[1])

    _certify(lp, norm_rows, nf, free, pos, x, xprime, ydash, objective, const, cost)
    STATS["certified"] += 1

    labels = []
    for b in tab.basis:
        if b < nf:
            labels.append(("x", free[b]))
        elif b < nf + m:
            labels.append(("s", norm_rows[b - nf][4]))
        else:
            labels.append(("a", norm_rows[b - nf - m][4]))
    alt = None
    if evict and _evict_degenerate(tab, {pos[j] for j in evict if j in pos}, is_art):
        ydash2, alt = read_duals()
        _certify(lp, norm_rows, nf, free, pos, x, xprime, ydash2, objective, const, cost)
        if alt == duals:
            alt = None

    STATS["optimal"] += 1
    return LpOutcome(OPTIMAL, objective, x, duals, labels, sec, total_pivots, alt)


def _certify(lp, norm_rows, nf, free, pos, x, xprime, ydash, objective, const, cost) -> None:
    """Recompute feasibility and strong duality from the original data."""
    for row in lp.rows:
        lhs = sum((v * x[j] for j, v in row.coeffs.items()), 0)
        ok = lhs <= row.rhs if row.rel == LE else lhs >= row.rhs if row.rel == GE else lhs == row.rhs
        if not ok:
            raise CertificateError(f"primal infeasible row {row.name or row}")
    for j in range(lp.n):
        if x[j] < lp.lower[j] or (lp.upper[j] is not None and x[j] > lp.upper[j]):
            raise CertificateError(f"bound violated for {lp.names[j]}")
    primal = sum((lp.objective[j] * x[j] for j in range(lp.n)), 0)
    if primal != objective:
        raise CertificateError("objective mismatch")
    # dual feasibility of the transformed problem
    reduced = list(cost[:nf])
    dual_obj = Fraction(const)
    for i, (coeffs, rel, rhs, sign, orig) in enumerate(norm_rows):
        y = ydash[i]
        if (rel == LE and y > 0) or (rel == GE and y < 0):
            raise CertificateError("dual sign violated")
        if y:
            dual_obj += y * rhs
            for k, v in coeffs.items():
                reduced[k] -= y * v
    if any(r < 0 for r in reduced):
        raise CertificateError("dual infeasible")
    if dual_obj != objective:
        raise CertificateError(f"strong duality violated: primal {objective} dual {dual_obj}")
    STATS["duality_checks"] += 1


# ---------------------------------------------------------------------------
# 0/1 programs


class BinarySystem:
    """A 0/1 constraint system compiled for propagation-based search.

    Rows are kept in ``<=`` form.  Root probing records, for every variable,
    which variables are forced to 0 when it is set to 1; pairwise conflicts
    give the cliques used for bounding.
    """

    def __init__(self, rows: Iterable[Row], n: int) -> None:
        self.n = n
        self.rows: list[tuple[list, object]] = []
        seen = set()
        for r in rows:
            forms = []
            if r.rel in (LE, EQ):
                forms.append((r.coeffs, r.rhs))
            if r.rel in (GE, EQ):
                forms.append(({j: -v for j, v in r.coeffs.items()}, -r.rhs))
            for coeffs, rhs in forms:
                key = (frozenset(coeffs.items()), rhs)
                if key not in seen:
                    seen.add(key)
                    self.rows.append((sorted(coeffs.items()), rhs))
        self.occurs: list[list[int]] = [[] for _ in range(n)]
        for i, (cs, _) in enumerate(self.rows):
            for j, _ in cs:
                self.occurs[j].append(i)
        self._probed = None

    def propagate(self, val: list, trail: list, rows: Iterable[int]) -> bool:
        """Fix variables implied by ``rows``; False on a violated row."""
        pending = list(rows)
        queued = set(pending)
        while pending:
            i = pending.pop()
            queued.discard(i)
            cs, rhs = self.rows[i]
            minact = 0
            for j, a in cs:
                v = val[j]
                if v is None:
                    if a < 0:
                        minact += a
                elif v:
                    minact += a
            if minact > rhs:
                return False
            slack = rhs - minact
            for j, a in cs:
                if val[j] is None and abs(a) > slack:
                    # fixing to the value that keeps the minimum activity unchanged
                    val[j] = 0 if a > 0 else 1
                    trail.append(j)
                    for k in self.occurs[j]:
                        if k not in queued:
                            queued.add(k)
                            pending.append(k)
        return True

    def probe(self) -> tuple[list | None, list[set], list[set]]:
        """Root fixings plus, per variable, what setting it to 1 forces.

        Returns (root values or None if infeasible, forced zeros, forced ones).
        Computed once per system and reused across objectives.
        """
        if self._probed is None:
            n = self.n
            val: list = [None] * n
            trail: list = []
            ok = self.propagate(val, trail, range(len(self.rows)))
            zeros: list[set] = [set() for _ in range(n)]
            ones: list[set] = [set() for _ in range(n)]
            changed = ok
            while changed and ok:
                changed = False
                for j in range(n):
                    if val[j] is not None:
                        continue
                    mark = len(trail)
                    val[j] = 1
                    trail.append(j)
                    good = self.propagate(val, trail, self.occurs[j])
                    implied = trail[mark + 1:]
                    zeros[j] = {k for k in implied if val[k] == 0}
                    ones[j] = {k for k in implied if val[k] == 1}
                    for k in trail[mark:]:
                        val[k] = None
                    del trail[mark:]
                    if not good:
                        val[j] = 0
                        trail.append(j)
                        changed = True
                        if not self.propagate(val, trail, self.occurs[j]):
                            ok = False
                            break
            if ok:
                for j in range(n):
                    if val[j] is not None:
                        zeros[j], ones[j] = set(), set()
                for j in range(n):
                    for k in zeros[j]:
                        zeros[k].add(j)
            self._probed = (val if ok else None, zeros, ones)
        return self._probed


def _solve_binary_search(lp: LinearProgram, tie_break, node_limit: int, system: BinarySystem | None) -> LpOutcome:
    n = lp.n
    if system is None:
        system = BinarySystem(lp.rows, n)
    root, conflicts, forces = system.probe()
    if root is None:
        return LpOutcome(INFEASIBLE)
    c = lp.objective
    t = list(tie_break) if tie_break is not None else [0] * n
    val = list(root)
    trail: list = []
    touched = []
    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        want = 1 if lo >= 1 else 0 if hi is not None and hi <= 0 else None
        if want is None:
            continue
        if val[j] is None:
            val[j] = want
            touched.extend(system.occurs[j])
        elif val[j] != want:
            return LpOutcome(INFEASIBLE)
    if touched and not system.propagate(val, trail, touched):
        return LpOutcome(INFEASIBLE)

    # greedy clique cover of the variables that can lower either objective
    gain = sorted((j for j in range(n) if val[j] is None and (c[j] < 0 or t[j] < 0)),
                  key=lambda j: (c[j], t[j], j))
    cliques: list[list[int]] = []
    covered: set = set()
    for j in gain:
        if j in covered:
            continue
        members = [j]
        covered.add(j)
        for k in gain:
            if k not in covered and all(k in conflicts[m] for m in members):
                members.append(k)
                covered.add(k)
        cliques.append(members)
    # a costly variable forced to 1 by members of a single clique only is
    # charged to that clique, so the bound sees the cost of choosing a member
    clique_of = {j: i for i, members in enumerate(cliques) for j in members}
    extra: dict[int, list[int]] = {j: [] for j in covered}
    for v in range(n):
        if v in covered or val[v] is not None or c[v] <= 0:
            continue
        by = [u for u in gain if v in forces[u]]
        if by and len({clique_of[u] for u in by}) == 1:
            for u in by:
                extra[u].append(v)
    first = [j for j in gain if c[j] < 0 or (c[j] == 0 and t[j] < 0)]
    rest = [j for j in range(n) if j not in set(first)]

    best: list = [None, None, None]  # primary, secondary, values
    nodes = [0]

    def bounds():
        p = q = 0
        for j in range(n):
            if val[j]:
                p += c[j]
                q += t[j]
        for members in cliques:
            mp = mq = 0
            for j in members:
                if val[j] is None:
                    cj = c[j]
                    for v in extra[j]:
                        if val[v] is None:
                            cj += c[v]
                    if cj < mp:
                        mp = cj
                    if t[j] < mq:
                        mq = t[j]
            p += mp
            q += mq
        return p, q

    def search() -> None:
        nodes[0] += 1
        if nodes[0] > node_limit:
            raise BudgetExceeded("binary branch-and-bound node limit exceeded")
        p, q = bounds()
        if best[0] is not None and (p > best[0] or (p == best[0] and q >= best[1])):
            return
        j = next((k for k in first if val[k] is None), None)
        order = (1, 0)
        if j is None:
            j = next((k for k in rest if val[k] is None), None)
            order = (0, 1)
        if j is None:
            best[:] = [p, q, list(val)]
            return
        for v in order:
            mark = len(trail)
            val[j] = v
            trail.append(j)
            if system.propagate(val, trail, system.occurs[j]):
                search()
            for k in trail[mark:]:
                val[k] = None
            del trail[mark:]

    search()
    if best[0] is None:
        return LpOutcome(INFEASIBLE, pivots=nodes[0])
    return LpOutcome(OPTIMAL, _norm(Fraction(best[0])), best[2], None, None, best[1], nodes[0])


def solve_binary(
    lp: LinearProgram,
    tie_break: list | None = None,
    node_limit: int = 100_000,
    bounding: str = "clique",
    system: BinarySystem | None = None,
) -> LpOutcome:
    """Exact 0/1 optimum by depth-first branch-and-bound.

    ``tie_break`` is a secondary objective minimised lexicographically after
    the primary one; it decides between solutions of equal primary value.
    ``bounding="clique"`` prunes with constraint propagation and a clique
    cover bound from root probing; ``bounding="lp"`` solves the exact LP
    relaxation at every node instead.  Both return the same optimum value.
    """
    if bounding == "clique":
        return _solve_binary_search(lp, tie_break, node_limit, system)
    if bounding != "lp":
        raise ValueError(f"unknown bounding {bounding!r}")
    n = lp.n
    base = LinearProgram(
        objective=list(lp.objective),
        rows=lp.rows,
        lower=[0] * n,
        upper=[1] * n,
        names=list(lp.names),
        secondary=list(tie_break) if tie_break is not None else None,
    )
    best_key = None
    best: LpOutcome | None = None
    stack: list[dict[int, int]] = [{}]
    nodes = 0
    while stack:
        fix = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise BudgetExceeded("binary branch-and-bound node limit exceeded")
        base.lower = [fix.get(j, 0) for j in range(n)]
        base.upper = [fix.get(j, 1) for j in range(n)]
        out = solve_lp(base)
        if out.status != OPTIMAL:
            continue
        key = (out.objective, out.secondary or 0)
        if best_key is not None and key >= best_key:
            continue
        frac = next((j for j in range(n) if type(out.x[j]) is Fraction), None)
        if frac is None:
            best_key, best = key, out
            continue
        stack.append({**fix, frac: 0})
        stack.append({**fix, frac: 1})
    if best is None:
        return LpOutcome(INFEASIBLE)
    return LpOutcome(OPTIMAL, best.objective, best.x, None, None, best.secondary, nodes)


# ---------------------------------------------------------------------------
# Branch-and-price


@dataclass
class Column:
    pattern: frozenset
    cost: int
    payload: object = None


@dataclass
class MasterRow:
    key: Hashable
    rel: str  # GE or EQ
    rhs: int = 1


@dataclass
class PricingResult:
    objective: Fraction
    column: Column | None


@dataclass
class BPOptions:
    big_m: int = 10
    max_nodes: int = 10_000
    max_iterations: int = 100_000
    warm_start: bool = True
    deadline: float | None = None  # time.monotonic() value


@dataclass
class BPResult:
    status: str
    objective: Fraction | None
    selected: list[tuple[Column, int]]
    columns: list[Column]
    nodes: int
    trace: list[dict]


Pricer = Callable[[dict, set, int], PricingResult]


class _Master:
    def __init__(self, rows: list[MasterRow], big_m: int) -> None:
        self.rows = rows
        self.big_m = big_m
        self.columns: list[Column] = []
        self.patterns: dict[frozenset, int] = {}

    def add(self, col: Column) -> int:
        self.patterns[col.pattern] = len(self.columns)
        self.columns.append(col)
        return len(self.columns) - 1

    def lp(self, bounds: dict[int, tuple], phase_one: bool = False) -> LinearProgram:
        # variable layout: artificials first, then columns in generation order
        ncol = len(self.columns)
        nrow = len(self.rows)
        objective = [1 if phase_one else self.big_m] * nrow
        objective += [0 if phase_one else c.cost for c in self.columns]
        names = [f"h[{r.key}]" for r in self.rows] + [f"x{k}" for k in range(ncol)]
        lower = [0] * nrow + [bounds.get(k, (0, None))[0] for k in range(ncol)]
        upper = [None] * nrow + [bounds.get(k, (0, None))[1] for k in range(ncol)]
        lp = LinearProgram(objective, [], lower, upper, names=names)
        index = {r.key: i for i, r in enumerate(self.rows)}
        coeffs: list[dict] = [{i: 1} for i in range(nrow)]
        for k, c in enumerate(self.columns):
            for key in c.pattern:
                if key in index:
                    coeffs[index[key]][nrow + k] = 1
        for i, r in enumerate(self.rows):
            lp.add_row(coeffs[i], r.rel, r.rhs, name=str(r.key))
        return lp

    def artificials(self) -> range:
        return range(len(self.rows))

    def split(self, x: list) -> tuple[list, list]:
        nrow = len(self.rows)
        return x[nrow:], x[:nrow]


def branch_and_price(
    rows: list[MasterRow],
    pricer: Pricer,
    options: BPOptions | None = None,
    initial_columns: Iterable[Column] = (),
    on_event: Callable[[dict], None] | None = None,
) -> BPResult:
    """Column generation with branching on fractional master variables.

    The restricted master starts from one artificial variable per row with
    cost ``big_m``.  ``pricer(duals, excluded_patterns, cost_weight)`` returns
    the pricing optimum; ``cost_weight`` is 0 during feasibility checks.
    """
    opts = options or BPOptions()
    master = _Master(rows, opts.big_m)
    for c in initial_columns:
        if c.pattern not in master.patterns:
            master.add(c)
    trace: list[dict] = []
    iterations = [0]

    def emit(ev: dict) -> None:
        trace.append(ev)
        if on_event:
            on_event(ev)

    def column_generation(bounds, node_id, phase_one=False):
        basis = None
        last = None
        while True:
            iterations[0] += 1
            if iterations[0] > opts.max_iterations:
                raise BudgetExceeded("column generation iteration limit exceeded")
            if opts.deadline is not None and time.monotonic() > opts.deadline:
                raise BudgetExceeded("time budget exceeded during branch-and-price")
            lp = master.lp(bounds, phase_one)
            out = solve_lp(lp, basis if opts.warm_start else None, evict=master.artificials())
            if out.status != OPTIMAL:
                return None
            basis = [b for b in out.basis]
            duals = {r.key: out.duals[i] for i, r in enumerate(rows)}
            emit({"event": "rmp", "node": node_id, "phase": "feasibility" if phase_one else "cost",
                  "objective": out.objective, "duals": duals,
                  "values": {k: v for k, v in enumerate(master.split(out.x)[0]) if v}})
            if last is not None and out.objective > last:
                raise CertificateError("restricted master objective increased")
            last = out.objective
            excluded = {master.columns[k].pattern for k, (_, hi) in bounds.items() if hi is not None}
            res = pricer(duals, excluded, 0 if phase_one else 1)
            if out.alt_duals is not None and (res.column is None or res.objective >= 0):
                # degenerate optimum: zero-level artificials inflate duals to M, so
                # price once more against the vertex with those artificials evicted
                alt = {r.key: out.alt_duals[i] for i, r in enumerate(rows)}
                res2 = pricer(alt, excluded, 0 if phase_one else 1)
                if res2.column is not None and res2.objective < 0:
                    emit({"event": "duals", "node": node_id, "duals": alt})
                    res = res2
            col = res.column
            emit({"event": "pp", "node": node_id, "objective": res.objective,
                  "column": None if col is None else col})
            if col is None or res.objective >= 0:
                return out
            if col.pattern in master.patterns:
                emit({"event": "stall", "node": node_id})
                return out
            master.add(col)

    best_obj = None
    best_sel: list[tuple[Column, int]] = []
    stack: list[dict[int, tuple]] = [{}]
    nodes = 0
    while stack:
        bounds = stack.pop()
        nodes += 1
        if nodes > opts.max_nodes:
            raise BudgetExceeded("branch-and-price node limit exceeded")
        node_id = nodes - 1
        emit({"event": "bp_node", "node": node_id, "bounds": dict(bounds)})
        while True:
            out = column_generation(bounds, node_id)
            if out is None:
                break
            art = master.split(out.x)[1]
            if not any(art):
                break
            feas = column_generation(bounds, node_id, phase_one=True)
            if feas is None or feas.objective > 0:
                out = None
                break
            master.big_m *= 2
            emit({"event": "big_m", "node": node_id, "value": master.big_m})
        if out is None:
            emit({"event": "prune", "node": node_id, "reason": "infeasible"})
            continue
        if best_obj is not None and math.ceil(out.objective) >= best_obj:
            emit({"event": "prune", "node": node_id, "reason": "bound"})
            continue
        xs = master.split(out.x)[0]
        frac = None
        best_dist = None
        for k, v in enumerate(xs):
            if type(v) is Fraction:
                dist = abs(v - math.floor(v) - Fraction(1, 2))
                if best_dist is None or dist < best_dist:
                    frac, best_dist = k, dist
        if frac is None:
            best_obj = out.objective
            best_sel = [(master.columns[k], v) for k, v in enumerate(xs) if v]
            emit({"event": "incumbent", "node": node_id, "objective": best_obj})
            continue
        v = xs[frac]
        lo, hi = bounds.get(frac, (0, None))
        stack.append({**bounds, frac: (lo, math.floor(v))})
        stack.append({**bounds, frac: (math.ceil(v), hi)})
    if best_obj is None:
        return BPResult(INFEASIBLE, None, [], master.columns, nodes, trace)
    return BPResult(OPTIMAL, best_obj, best_sel, master.columns, nodes, trace)
