"""Executable check of the tableau properties P1-P10 on a completion graph.

The graph is read as a tableau: S holds the live nodes that are not
indirectly blocked, labels are node labels, and E(R) holds the pairs whose
edge label contains R.  P5 is checked modulo blocking: a directly blocked
node may satisfy an existential through its blocker's neighbours.  An extra
``T`` entry checks that every node satisfies the internalized Tbox.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .concepts import BOTTOM, TOP, All, And, Nominal, Not, Or, RoleBox, Some, Tbox
from .tableau import CompletionGraph, blocker, indirectly_blocked, node_name

PROPERTIES = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "P10", "T")


@dataclass
class PropertyResult:
    ok: bool = True
    witness: str = ""


@dataclass
class PropertyReport:
    results: dict[str, PropertyResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.ok]

    def lines(self) -> list[str]:
        out = []
        for k, r in self.results.items():
            out.append(f"{k}: {'pass' if r.ok else 'FAIL'}" + ("" if r.ok else f" ({r.witness})"))
        return out


def verify_tableau_properties(graph: CompletionGraph, tbox: Tbox, rolebox: RoleBox) -> PropertyReport:
    g = graph
    report = PropertyReport({k: PropertyResult() for k in PROPERTIES})

    def fail(key: str, witness: str) -> None:
        if report.results[key].ok:
            report.results[key] = PropertyResult(False, witness)

    nodes = sorted(n.id for n in g.live() if not indirectly_blocked(g, n.id))
    in_s = set(nodes)

    def edges_from(x: int):
        for y in g.neighbours(x):
            if y in in_s:
                yield y, g.edge(x, y)

    for x in nodes:
        lab = g.label(x)
        name = node_name(x)
        for c in sorted(lab):
            if c == BOTTOM:
                fail("P1", f"{name} contains bottom")
            if type(c) is Not and c.arg in lab:
                fail("P1", f"{name} contains {c.arg.key} and {c.key}")
            elif type(c) is And:
                missing = [a for a in c.args if a not in lab]
                if missing:
                    fail("P2", f"{name} has {c.key} but not {missing[0].key}")
            elif type(c) is Or:
                if not any(a in lab for a in c.args):
                    fail("P3", f"{name} has {c.key} but none of its disjuncts")
            elif type(c) is All:
                for y, roles in edges_from(x):
                    if c.role in roles and c.filler not in g.label(y):
                        fail("P4", f"{name} has {c.key}, {node_name(y)} lacks {c.filler.key}")
                trans = [r for r in rolebox.all_roles()
                         if rolebox.is_transitive(r) and rolebox.subsumes_star(r, c.role)]
                for y, roles in edges_from(x):
                    for r in trans:
                        if any(rolebox.subsumes_star(u, r) for u in roles) and All(r, c.filler) not in g.label(y):
                            fail("P6", f"{name} has {c.key}, {node_name(y)} lacks {All(r, c.filler).key}")
            elif type(c) is Some:
                if not _has_witness(g, x, c, in_s):
                    b = blocker(g, x)
                    if b is None or not _has_witness(g, b, c, in_s):
                        fail("P5", f"{name} has {c.key} without an {c.role} neighbour holding {c.filler.key}")
        if tbox.c_t != TOP and tbox.c_t not in lab:
            fail("T", f"{name} lacks the internalized Tbox concept")
        for a, d in tbox.unfold.items():
            if a in lab and d != TOP and d not in lab:
                fail("T", f"{name} has {a.key} but not its definition {d.key}")
        if g.nodes[x].card > 1 and any(type(c) is Nominal for c in lab):
            fail("P9", f"{name} holds a nominal with cardinality {g.nodes[x].card}")
        for y, roles in edges_from(x):
            for r in roles:
                missing = [s for s in rolebox.supers(r) if s not in roles]
                if missing:
                    fail("P7", f"<{name},{node_name(y)}> in E({r}) but not E({missing[0]})")
                if r.inv() not in g.edge(y, x):
                    fail("P8", f"<{name},{node_name(y)}> in E({r}) but <{node_name(y)},{name}> not in E({r.inv()})")

    holders: dict[str, list[int]] = {}
    for x in nodes:
        for c in g.label(x):
            if type(c) is Nominal:
                holders.setdefault(c.name, []).append(x)
    for o, xs in sorted(holders.items()):
        if len(xs) > 1:
            fail("P9", f"{o} in {', '.join(node_name(x) for x in xs)}")
    for o in sorted(tbox.nominals):
        k = len(holders.get(o, []))
        if k != 1:
            fail("P10", f"{o} labels {k} nodes")
    return report


def _has_witness(g: CompletionGraph, x: int, c: Some, in_s: set) -> bool:
    for y in g.neighbours(x):
        if y in in_s and c.role in g.edge(x, y) and c.filler in g.label(y):
            return True
    return False
