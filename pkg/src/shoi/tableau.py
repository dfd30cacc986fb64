"""Completion-graph tableau for SHOI with an algebraic module for ∃/∀/nominals.

Rules run from a priority queue: nom_merge, inverse, ⊓ (and lazy unfolding),
∀, ∀₊, ⊔, then the algebraic module (AM) whose solution is realised by the
fil and e rules.  ⊔ choices are undone by restoring graph snapshots.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from .algebraic import NodeContext, NodeOptions, SolutionTuple, build_decomposition, build_pp, solve_node
from .concepts import (
    BOTTOM,
    TOP,
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
    internalize,
    nnf,
)
from .simplex import INFEASIBLE, BudgetExceeded

CONSISTENT = "CONSISTENT"
INCONSISTENT = "INCONSISTENT"
GAVE_UP = "GAVE_UP"

log = logging.getLogger("shoi")

PRIORITY = {"nom_merge": 0, "inverse": 1, "and": 2, "unfold": 2, "forall": 3, "forall_plus": 4, "or": 5, "am": 6}


class Clash(Exception):
    def __init__(self, node: int, reason: str) -> None:
        super().__init__(reason)
        self.node = node
        self.reason = reason


@dataclass
class Node:
    id: int
    label: set
    card: int = 1
    back: dict = field(default_factory=dict)  # neighbour id -> frozenset of roles (B(x))
    initial: bool = False
    parent: int | None = None
    alive: bool = True
    own: set = field(default_factory=set)  # neighbours placed by this node's own solution
    am_sig: object = None

    @property
    def name(self) -> str:
        return node_name(self.id)

    def copy(self) -> "Node":
        return Node(self.id, set(self.label), self.card, dict(self.back), self.initial, self.parent,
                    self.alive, set(self.own), self.am_sig)


def node_name(i: int) -> str:
    return "x" if i == 0 else f"x{i}"


class CompletionGraph:
    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}
        self.edges: dict[tuple[int, int], set[Role]] = {}
        self.adj: dict[int, set[int]] = {}
        self.forward: dict[int, int] = {}

    def copy(self) -> "CompletionGraph":
        g = CompletionGraph()
        g.nodes = {k: n.copy() for k, n in self.nodes.items()}
        g.edges = {k: set(v) for k, v in self.edges.items()}
        g.adj = {k: set(v) for k, v in self.adj.items()}
        g.forward = dict(self.forward)
        return g

    def find(self, x: int) -> int:
        while x in self.forward:
            x = self.forward[x]
        return x

    def add_node(self, initial: bool = False, parent: int | None = None, card: int = 1) -> Node:
        n = Node(len(self.nodes), set(), card, initial=initial, parent=parent)
        self.nodes[n.id] = n
        self.adj[n.id] = set()
        return n

    def live(self) -> list[Node]:
        return [n for n in self.nodes.values() if n.alive]

    def label(self, x: int) -> set:
        return self.nodes[x].label

    def edge(self, x: int, y: int) -> set:
        return self.edges.get((x, y), set())

    def neighbours(self, x: int) -> list[int]:
        return sorted(self.adj[x])

    def parent(self, x: int) -> int | None:
        p = self.nodes[x].parent
        return None if p is None else self.find(p)

    def nominal_nodes(self, o: Concept) -> list[int]:
        return [n.id for n in self.nodes.values() if n.alive and o in n.label]


def blockable(g: CompletionGraph, x: int) -> bool:
    """Nodes that may be blocked: alive, not initial, no nominal in the label."""
    n = g.nodes[x]
    return n.alive and not n.initial and not any(type(c) is Nominal for c in n.label)


def _ancestors(g: CompletionGraph, x: int) -> list[int]:
    out, seen = [], {x}
    p = g.parent(x)
    while p is not None and p not in seen and blockable(g, p):
        out.append(p)
        seen.add(p)
        p = g.parent(p)
    return out


def directly_blocked_by(g: CompletionGraph, x: int) -> int | None:
    """Pairwise (equality) blocking against a blockable ancestor."""
    if not blockable(g, x):
        return None
    xp = g.parent(x)
    if xp is None or not blockable(g, xp):
        return None
    lx, lxp, exx = g.label(x), g.label(xp), g.edge(xp, x)
    for y in _ancestors(g, x):
        yp = g.parent(y)
        if yp is None or not blockable(g, yp):
            continue
        if g.label(y) == lx and g.label(yp) == lxp and g.edge(yp, y) == exx:
            return y
    return None


def blocker(g: CompletionGraph, x: int) -> int | None:
    """The node blocking ``x`` directly, or the blocker of a blocked ancestor."""
    for a in reversed(_ancestors(g, x)):
        b = directly_blocked_by(g, a)
        if b is not None:
            return b
    return directly_blocked_by(g, x)


def indirectly_blocked(g: CompletionGraph, x: int) -> bool:
    return any(directly_blocked_by(g, a) is not None for a in _ancestors(g, x))


@dataclass
class CheckOptions:
    max_nodes: int = 100_000
    timeout_s: float = 300.0
    paper_m: int | None = None
    max_bp_nodes: int = 10_000
    lazy_unfolding: bool = True
    root_concept: Concept | None = None
    warm_start: bool = True


@dataclass
class CheckResult:
    verdict: str
    graph: CompletionGraph | None
    stats: dict
    trace: list
    reason: str = ""

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT


@dataclass
class _Branch:
    graph: CompletionGraph
    todo: list
    node: int
    concept: Concept
    remaining: list


class Engine:
    def __init__(self, tbox: Tbox, rolebox: RoleBox, options: CheckOptions | None = None,
                 on_event: Callable[[dict], None] | None = None) -> None:
        self.tbox = tbox
        self.rolebox = rolebox
        self.opts = options or CheckOptions()
        self.on_event = on_event
        self.g = CompletionGraph()
        self.todo: list = []
        self.seq = 0
        self.branches: list[_Branch] = []
        self.trace: list[dict] = []
        self.stats = {"nodes": 0, "rules": {}, "am_calls": 0, "columns": 0, "bp_nodes": 0,
                      "backtracks": 0, "clashes": 0}
        self.deadline = time.monotonic() + self.opts.timeout_s
        self.c_t = tbox.c_t

    # -- plumbing ---------------------------------------------------------

    def emit(self, ev: dict) -> None:
        if log.isEnabledFor(logging.DEBUG):
            log.debug("%s", ev)
        self.trace.append(ev)
        if self.on_event:
            self.on_event(ev)

    def count(self, rule: str) -> None:
        self.stats["rules"][rule] = self.stats["rules"].get(rule, 0) + 1

    def push(self, rule: str, node: int, concept: Concept | None = None) -> None:
        self.seq += 1
        heapq.heappush(self.todo, (PRIORITY[rule], self.seq, rule, node, concept))

    def new_node(self, concepts, initial=False, parent=None, card=1, why="") -> int:
        if len(self.g.nodes) >= self.opts.max_nodes:
            raise BudgetExceeded(f"node budget of {self.opts.max_nodes} exceeded")
        n = self.g.add_node(initial, parent, card)
        self.stats["nodes"] += 1
        self.emit({"event": "node", "node": n.name, "initial": initial,
                   "parent": None if parent is None else node_name(parent), "card": card, "why": why})
        for c in sorted(concepts):
            self.add(n.id, c)
        if self.c_t != TOP:
            self.add(n.id, self.c_t)
        return n.id

    def add(self, x: int, c: Concept) -> bool:
        """Add ``c`` to L(x), queueing rules it may trigger. Returns True if new."""
        if c == TOP:
            return False
        node = self.g.nodes[x]
        if c in node.label:
            return False
        node.label.add(c)
        if c == BOTTOM:
            raise Clash(x, "bottom")
        t = type(c)
        if t is Not and c.arg in node.label:
            raise Clash(x, f"{c.arg.key} and {c.key}")
        if (t is Atom or t is Nominal) and Not(c) in node.label:
            raise Clash(x, f"{c.key} and (not {c.key})")
        if t is Nominal:
            if node.card > 1:
                raise Clash(x, f"nominal {c.name} on a node of cardinality {node.card}")
            self.push("nom_merge", x, c)
        if (t is Atom or t is Nominal) and c in self.tbox.unfold:
            self.push("unfold", x, c)
        elif t is And:
            self.push("and", x, c)
        elif t is Or:
            self.push("or", x, c)
        elif t is All:
            self.push("inverse", x, c)
            self.push("forall", x, c)
            self.push("forall_plus", x, c)
            self.push("am", x)
        elif t is Some:
            self.push("am", x)
        return True

    def add_roles(self, x: int, y: int, roles) -> bool:
        """Add ``roles`` and all superroles to L(x,y), inverses to L(y,x)."""
        fwd = set(self.rolebox.role_closure(roles))
        cur = self.g.edges.setdefault((x, y), set())
        back = self.g.edges.setdefault((y, x), set())
        new = fwd - cur
        if not new:
            return False
        cur |= fwd
        back |= {r.inv() for r in fwd}
        self.g.adj[x].add(y)
        self.g.adj[y].add(x)
        self.touch_edge(x)
        self.touch_edge(y)
        return True

    def touch_edge(self, x: int) -> None:
        for c in self.g.nodes[x].label:
            if type(c) is All:
                self.push("inverse", x, c)
                self.push("forall", x, c)
                self.push("forall_plus", x, c)

    # -- blocking ---------------------------------------------------------

    def blockable(self, x: int) -> bool:
        return blockable(self.g, x)

    def blocker(self, x: int) -> int | None:
        return blocker(self.g, x)

    def is_blocked(self, x: int) -> bool:
        return blocker(self.g, x) is not None

    # -- algebraic module hand-off ---------------------------------------

    def has_exists(self, x: int) -> bool:
        return any(type(c) is Some for c in self.g.label(x))

    def back_edges(self, x: int) -> dict:
        out: dict[int, frozenset] = {}
        for v, roles in self.g.nodes[x].back.items():
            v = self.g.find(v)
            out[v] = out.get(v, frozenset()) | roles
        return out

    def am_signature(self, x: int):
        lab = frozenset(c for c in self.g.label(x) if type(c) in (Some, All))
        return (lab, frozenset(self.back_edges(x).items()), self.g.nodes[x].card)

    def awaits_am(self, x: int) -> bool:
        n = self.g.nodes[x]
        return self.has_exists(x) and n.am_sig != self.am_signature(x) and not self.is_blocked(x)

    # -- rules ------------------------------------------------------------

    def rule_unfold(self, x: int, c: Concept) -> bool:
        d = self.tbox.unfold[c]
        if d in self.g.label(x) or d == TOP:
            return False
        self.add(x, d)
        self.emit({"event": "rule", "rule": "unfold", "node": node_name(x), "concept": c.key, "added": [d.key]})
        return True

    def rule_and(self, x: int, c: And) -> bool:
        lab = self.g.label(x)
        missing = [a for a in c.args if a not in lab]
        if not missing:
            return False
        for a in missing:
            self.add(x, a)
        self.emit({"event": "rule", "rule": "and", "node": node_name(x), "concept": c.key,
                   "added": [a.key for a in missing]})
        return True

    def forall_targets(self, x: int, c: All) -> list[int]:
        out = []
        for y in self.g.neighbours(x):
            if any(self.rolebox.subsumes_star(r, c.role) for r in self.g.edge(x, y)):
                out.append(y)
        return out

    def deferred(self, x: int) -> set[int]:
        # universal propagation to recorded neighbours waits for the algebraic solution
        if self.awaits_am(x):
            return set(self.back_edges(x))
        return set()

    def rule_forall(self, x: int, c: All) -> bool:
        done = False
        skip = self.deferred(x)
        for y in self.forall_targets(x, c):
            if y in skip or c.filler in self.g.label(y):
                continue
            self.add(y, c.filler)
            self.emit({"event": "rule", "rule": "forall", "node": node_name(x), "target": node_name(y),
                       "concept": c.key, "added": [c.filler.key]})
            done = True
        return done

    def rule_forall_plus(self, x: int, c: All) -> bool:
        done = False
        skip = self.deferred(x)
        trans = [r for r in self.rolebox.all_roles()
                 if self.rolebox.is_transitive(r) and self.rolebox.subsumes_star(r, c.role)]
        for r in trans:
            d = All(r, c.filler)
            for y in self.g.neighbours(x):
                if y in skip or d in self.g.label(y):
                    continue
                if any(self.rolebox.subsumes_star(u, r) for u in self.g.edge(x, y)):
                    self.add(y, d)
                    self.emit({"event": "rule", "rule": "forall_plus", "node": node_name(x),
                               "target": node_name(y), "concept": c.key, "added": [d.key]})
                    done = True
        return done

    def rule_inverse(self, y: int, c: All) -> bool:
        node = self.g.nodes[y]
        done = False
        own = {self.g.find(v) for v in node.own}
        for x in self.forall_targets(y, c):
            if x in own or x == y:
                continue
            roles = frozenset(self.g.edge(y, x))
            if node.back.get(x) == roles:
                continue
            node.back[x] = roles
            self.push("am", y)
            self.emit({"event": "rule", "rule": "inverse", "node": node_name(y), "target": node_name(x),
                       "roles": sorted(str(r) for r in roles)})
            done = True
        return done

    def rule_nom_merge(self, x: int, o: Nominal) -> bool:
        if o not in self.g.label(x):
            return False
        others = [y for y in self.g.nominal_nodes(o) if y != x]
        if not others:
            return False
        self.apply_nom_merge(x, others[0], o)
        return True

    def merge(self, src: int, dst: int, o: Nominal) -> None:
        g = self.g
        self.emit({"event": "rule", "rule": "nom_merge", "node": node_name(src), "into": node_name(dst),
                   "nominal": o.name})
        s, d = g.nodes[src], g.nodes[dst]
        s.alive = False
        g.forward[src] = dst
        for z in sorted(g.adj[src]):
            out = g.edges.pop((src, z), set())
            inc = g.edges.pop((z, src), set())
            g.adj[z].discard(src)
            zz = dst if z == src else z
            if out:
                g.edges.setdefault((dst, zz), set()).update(out)
            if inc:
                g.edges.setdefault((zz, dst), set()).update(inc)
            g.adj[dst].add(zz)
            g.adj[zz].add(dst)
        g.adj[src] = set()
        for v, roles in s.back.items():
            v = g.find(v)
            d.back[v] = d.back.get(v, frozenset()) | roles
        for n in g.live():
            if src in n.back:
                roles = n.back.pop(src)
                n.back[dst] = n.back.get(dst, frozenset()) | roles
        d.own |= {g.find(v) for v in s.own}
        for z in g.adj[dst]:
            self.touch_edge(z)
        self.touch_edge(dst)
        self.push("am", dst)
        for c in sorted(s.label):
            self.add(dst, c)

    def rule_or(self, x: int, c: Or) -> bool:
        lab = self.g.label(x)
        if any(a in lab for a in c.args):
            return False
        choices = list(c.args)
        snapshot = _Branch(self.g.copy(), list(self.todo), x, c, choices[1:])
        self.branches.append(snapshot)
        self.emit({"event": "rule", "rule": "or", "node": node_name(x), "concept": c.key,
                   "choice": choices[0].key, "alternatives": len(choices) - 1})
        self.add(x, choices[0])
        return True

    def rule_am(self, x: int) -> bool:
        node = self.g.nodes[x]
        if not self.has_exists(x):
            return False
        sig = self.am_signature(x)
        if node.am_sig == sig or self.is_blocked(x):
            return False
        self.run_am(x, sig)
        return True

    def run_am(self, x: int, sig) -> None:
        g = self.g
        back = self.back_edges(x)
        names = {v: node_name(v) for v in back}
        q = build_decomposition(sorted(g.label(x)), back, self.rolebox, names)
        ctx = NodeContext(
            reuse_labels={v: set(g.label(v)) for v in back},
            nominal_labels={o: set(g.label(ids[0])) for o in q.q_nominals
                            if (ids := g.nominal_nodes(Nominal(o)))},
            label=set(g.label(x)),
        )
        pp = build_pp(q, self.tbox, self.rolebox, ctx)
        self.stats["am_calls"] += 1
        name = node_name(x)
        self.emit({"event": "am", "node": name, **q.describe()})

        def relay(ev: dict) -> None:
            ev = dict(ev)
            if ev["event"] == "pp":
                self.stats["columns"] += ev["column"] is not None and ev["objective"] < 0
            if ev["event"] == "bp_node":
                self.stats["bp_nodes"] += 1
            ev["bp_node"] = ev.pop("node", None)
            ev["node"] = name
            self.emit(ev)

        opts = NodeOptions(paper_m=self.opts.paper_m, max_bp_nodes=self.opts.max_bp_nodes,
                           warm_start=self.opts.warm_start, deadline=self.deadline)
        res = solve_node(q, pp, opts, on_event=relay)
        if res.status == INFEASIBLE:
            self.emit({"event": "am_result", "node": name, "status": "infeasible"})
            raise Clash(x, "algebraic module infeasible")
        self.emit({"event": "am_result", "node": name, "status": "optimal", "objective": res.objective,
                   "big_m": res.big_m, "sigma": [t.describe(node_name) for t in res.tuples]})
        g.nodes[x].am_sig = sig
        for t in res.tuples:
            self.apply_tuple(x, t)
        # universal restrictions held back for the recorded neighbours may now fire
        self.touch_edge(x)

    def apply_tuple(self, x: int, t: SolutionTuple) -> None:
        g = self.g
        node = g.nodes[x]
        if not t.roles:
            # a nominal placed outside every role filler: make sure its node exists
            noms = [c for c in t.concepts if type(c) is Nominal]
            for o in noms:
                if not g.nominal_nodes(o):
                    self.new_node(t.concepts, initial=True, why=f"nominal {o.name}")
            return
        if t.reuse:
            for v in sorted(t.reuse):
                v = g.find(v)
                added = [c for c in sorted(t.concepts) if c not in g.label(v)]
                if g.nodes[v].card != t.n:
                    g.nodes[v].card = t.n
                self.emit({"event": "rule", "rule": "fil", "node": node_name(x), "reuse": node_name(v),
                           "added": [c.key for c in added], "card": t.n})
                self.count("fil")
                for c in added:
                    self.add(v, c)
                v = g.find(v)
                node.own.add(v)
                self.apply_e(x, v, t)
            return
        for y in g.neighbours(x):
            if (set(t.roles) <= g.edge(x, y) and t.concepts <= g.label(y) and g.nodes[y].card >= t.n):
                node.own.add(y)
                return
        y = self.new_node(t.concepts, parent=x, card=t.n, why=f"fil {node_name(x)} {t.describe()}")
        self.emit({"event": "rule", "rule": "fil", "node": node_name(x), "created": node_name(y),
                   "tuple": t.describe()})
        self.count("fil")
        x, y = g.find(x), g.find(y)
        g.nodes[x].own.add(y)
        self.apply_e(x, y, t)

    def apply_e(self, x: int, y: int, t: SolutionTuple) -> None:
        if self.add_roles(x, y, t.roles):
            self.count("e")
            self.emit({"event": "rule", "rule": "e", "node": node_name(x), "target": node_name(y),
                       "forward": sorted(str(r) for r in self.g.edge(x, y)),
                       "backward": sorted(str(r) for r in self.g.edge(y, x))})

    # rule catalogue names
    apply_and = rule_and
    apply_or = rule_or
    apply_forall = rule_forall
    apply_forall_trans = rule_forall_plus
    apply_inverse = rule_inverse

    def apply_nom_merge(self, x: int, y: int, o: Nominal) -> None:
        """Merge two nodes sharing ``o``: an initial ``x`` absorbs, else ``y`` does."""
        if self.g.nodes[x].initial:
            self.merge(y, x, o)
        else:
            self.merge(x, y, o)

    def apply_fil(self, x: int, sigma) -> None:
        if self.is_blocked(x):
            return
        for t in sigma:
            self.apply_tuple(x, t)

    # -- main loop -------------------------------------------------------

    def apply(self, rule: str, x: int, c) -> bool:
        if rule == "unfold":
            return self.rule_unfold(x, c)
        if rule == "and":
            return self.rule_and(x, c)
        if rule == "or":
            return self.rule_or(x, c)
        if rule == "forall":
            return self.rule_forall(x, c)
        if rule == "forall_plus":
            return self.rule_forall_plus(x, c)
        if rule == "inverse":
            return self.rule_inverse(x, c)
        if rule == "nom_merge":
            return self.rule_nom_merge(x, c)
        if rule == "am":
            return self.rule_am(x)
        raise ValueError(rule)

    def pending(self, rule: str, x: int, c) -> bool:
        """Guard of a rule instance, without applying it."""
        g = self.g
        lab = g.label(x)
        if rule == "and":
            return not set(c.args) <= lab
        if rule == "or":
            return not any(a in lab for a in c.args)
        if rule == "unfold":
            return self.tbox.unfold[c] not in lab and self.tbox.unfold[c] != TOP
        if rule == "nom_merge":
            return len(g.nominal_nodes(c)) > 1
        if rule == "forall":
            skip = self.deferred(x)
            return any(y not in skip and c.filler not in g.label(y) for y in self.forall_targets(x, c))
        if rule == "forall_plus":
            skip = self.deferred(x)
            for r in self.rolebox.all_roles():
                if self.rolebox.is_transitive(r) and self.rolebox.subsumes_star(r, c.role):
                    d = All(r, c.filler)
                    for y in g.neighbours(x):
                        if (y not in skip and d not in g.label(y)
                                and any(self.rolebox.subsumes_star(u, r) for u in g.edge(x, y))):
                            return True
            return False
        if rule == "inverse":
            node = g.nodes[x]
            own = {g.find(v) for v in node.own}
            return any(y not in own and y != x and node.back.get(y) != frozenset(g.edge(x, y))
                       for y in self.forall_targets(x, c))
        if rule == "am":
            return self.has_exists(x) and g.nodes[x].am_sig != self.am_signature(x) and not self.is_blocked(x)
        raise ValueError(rule)

    def rescan(self) -> bool:
        """Queue every rule instance that is still applicable; True if any."""
        found = False
        for n in self.g.live():
            x = n.id
            for c in sorted(n.label):
                t = type(c)
                rules = []
                if t is And:
                    rules.append("and")
                elif t is Or:
                    rules.append("or")
                elif t is All:
                    rules += ["inverse", "forall", "forall_plus"]
                elif t is Nominal:
                    rules.append("nom_merge")
                if c in self.tbox.unfold:
                    rules.append("unfold")
                for r in rules:
                    if self.pending(r, x, c):
                        self.push(r, x, c)
                        found = True
            if self.pending("am", x, None):
                self.push("am", x)
                found = True
        return found

    def ensure_nominals(self) -> bool:
        created = False
        for o in self.tbox.nominals:
            c = Nominal(o)
            if not self.g.nominal_nodes(c):
                self.new_node([c], initial=True, why=f"nominal {o}")
                created = True
        return created

    def backtrack(self, clash: Clash) -> bool:
        self.stats["clashes"] += 1
        self.emit({"event": "clash", "node": node_name(clash.node), "reason": clash.reason})
        while self.branches:
            b = self.branches.pop()
            self.stats["backtracks"] += 1
            self.g = b.graph
            self.todo = b.todo
            choice = b.remaining[0]
            rest = b.remaining[1:]
            if rest:
                self.branches.append(_Branch(self.g.copy(), list(self.todo), b.node, b.concept, rest))
            self.emit({"event": "backtrack", "node": node_name(b.node), "concept": b.concept.key,
                       "choice": choice.key, "alternatives": len(rest)})
            try:
                self.add(b.node, choice)
                return True
            except Clash as again:
                self.stats["clashes"] += 1
                self.emit({"event": "clash", "node": node_name(again.node), "reason": again.reason})
        return False

    def initialise(self) -> None:
        if self.opts.root_concept is not None or not self.tbox.individuals:
            taken = set(self.tbox.nominals) | set(self.tbox.individuals)
            fresh = "o_root"
            k = 1
            while fresh in taken:
                k += 1
                fresh = f"o_root{k}"
            concepts = [Nominal(fresh)]
            if self.opts.root_concept is not None:
                concepts.append(nnf(self.opts.root_concept))
            self.new_node(concepts, initial=True, why="root")
        for a in self.tbox.individuals:
            if not self.g.nominal_nodes(Nominal(a)):
                self.new_node([Nominal(a)], initial=True, why=f"individual {a}")

    def run(self) -> CheckResult:
        try:
            try:
                self.initialise()
            except Clash as c:
                if not self.backtrack(c):
                    return self.finish(INCONSISTENT, c.reason)
            while True:
                if time.monotonic() > self.deadline:
                    raise BudgetExceeded(f"timeout of {self.opts.timeout_s} s exceeded")
                if not self.todo:
                    try:
                        if self.rescan() or self.ensure_nominals():
                            continue
                    except Clash as c:
                        if not self.backtrack(c):
                            return self.finish(INCONSISTENT, c.reason)
                        continue
                    return self.finish(CONSISTENT)
                _, _, rule, x, c = heapq.heappop(self.todo)
                x = self.g.find(x)
                if not self.g.nodes[x].alive:
                    continue
                try:
                    if self.apply(rule, x, c):
                        self.count(rule)
                except Clash as cl:
                    if not self.backtrack(cl):
                        return self.finish(INCONSISTENT, cl.reason)
        except BudgetExceeded as e:
            return self.finish(GAVE_UP, str(e))

    def finish(self, verdict: str, reason: str = "") -> CheckResult:
        self.emit({"event": "verdict", "verdict": verdict, "reason": reason})
        graph = self.g if verdict == CONSISTENT else None
        return CheckResult(verdict, graph, self.stats, self.trace, reason)


def check_consistency(tbox: Tbox, rolebox: RoleBox, options: CheckOptions | None = None,
                      on_event: Callable[[dict], None] | None = None) -> CheckResult:
    """Decide consistency of an internalized Tbox."""
    return Engine(tbox, rolebox, options, on_event).run()


def check_document(doc, options: CheckOptions | None = None,
                   on_event: Callable[[dict], None] | None = None) -> CheckResult:
    options = options or CheckOptions()
    rb = doc.rolebox()
    tbox = internalize(doc.axioms(), rb, lazy_unfolding=options.lazy_unfolding)
    return check_consistency(tbox, rb, options, on_event)
