"""Random instance generators for cross-checking against the oracle.

Ontologies are drawn from at most 4 atoms, 2 roles and 3 nominals.  A planted
instance first draws a random interpretation with at most 3 elements and then
keeps only axioms that interpretation satisfies, so it is consistent with a
small model by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebraic import DecompositionSet, NodeContext, PricingProblem, build_decomposition, build_pp
from .concepts import (
    All,
    Atom,
    Concept,
    Nominal,
    Not,
    Role,
    RoleBox,
    Some,
    Tbox,
    conj,
    disj,
    internalize,
    nnf,
)
from .oracle import FiniteInterpretation
from .parser import OntologyDocument, parse_ontology

ATOMS = ("A", "B", "C", "D")
ROLES = ("R", "S")
NOMINALS = ("o1", "o2", "o3")


@dataclass
class OntologyInstance:
    text: str
    doc: OntologyDocument
    small_model: bool
    planted: FiniteInterpretation | None = None


def _random_concept(rng: random.Random, atoms, roles, noms, depth: int) -> Concept:
    leaves = [Atom(a) for a in atoms] + [Nominal(o) for o in noms]
    if depth <= 0 or rng.random() < 0.35:
        c = rng.choice(leaves)
        return Not(c) if rng.random() < 0.25 else c
    kind = rng.choice(("and", "or", "some", "all", "some", "all"))
    if kind in ("and", "or"):
        a = _random_concept(rng, atoms, roles, noms, depth - 1)
        b = _random_concept(rng, atoms, roles, noms, depth - 1)
        return conj(a, b) if kind == "and" else disj(a, b)
    role = Role(rng.choice(roles), rng.random() < 0.3)
    filler = _random_concept(rng, atoms, roles, noms, depth - 1)
    return Some(role, filler) if kind == "some" else All(role, filler)


def _random_interpretation(rng: random.Random, atoms, roles, noms, rbox: list, transitive: set) -> FiniteInterpretation:
    k = rng.randint(1, 3)
    dom = range(k)
    concepts = {a: frozenset(d for d in dom if rng.random() < 0.5) for a in atoms}
    rel = {p: {(d, e) for d in dom for e in dom if rng.random() < 0.35} for p in roles}
    # close under the role axioms
    changed = True
    while changed:
        changed = False
        for sub, sup in rbox:
            pairs = {(b, a) for a, b in rel[sub.name]} if sub.inverted != sup.inverted else set(rel[sub.name])
            if not pairs <= rel[sup.name]:
                rel[sup.name] |= pairs
                changed = True
        for p in transitive:
            extra = {(a, d) for a, b in rel[p] for c, d in rel[p] if b == c} - rel[p]
            if extra:
                rel[p] |= extra
                changed = True
    return FiniteInterpretation(
        size=k,
        concepts=concepts,
        roles={p: frozenset(v) for p, v in rel.items()},
        nominals={o: rng.randrange(k) for o in noms},
    )


def random_ontology(seed: int, planted: bool = True, max_axioms: int = 5) -> OntologyInstance:
    rng = random.Random(seed)
    atoms = ATOMS[: rng.randint(1, 4)]
    roles = ROLES[: rng.randint(1, 2)]
    noms = NOMINALS[: rng.randint(0, 3)]
    rbox = []
    if len(roles) == 2 and rng.random() < 0.4:
        rbox.append((Role("R", rng.random() < 0.3), Role("S")))
    transitive = {p for p in roles if rng.random() < 0.2}
    model = _random_interpretation(rng, atoms, roles, noms, rbox, transitive) if planted else None

    lines = [f"(transitive {p})" for p in sorted(transitive)]
    lines += [f"(subrole {a.key} {b.key})" for a, b in rbox]
    target = rng.randint(1, max_axioms)
    kept = 0
    for _ in range(40 * target):
        if kept >= target:
            break
        form = rng.random()
        if form < 0.15 and noms:
            o = rng.choice(noms)
            c = _random_concept(rng, atoms, roles, noms, 2)
            if model is not None and model.nominals[o] not in model.extension(nnf(c)):
                continue
            lines.append(f"(instance {o} {c.key})")
        elif form < 0.25 and len(atoms) >= 2:
            a, b = rng.sample(atoms, 2)
            if model is not None and model.concepts[a] & model.concepts[b]:
                continue
            lines.append(f"(disjoint {a} {b})")
        else:
            lhs = _random_concept(rng, atoms, roles, noms, 1)
            rhs = _random_concept(rng, atoms, roles, noms, 2)
            if lhs == rhs:
                continue
            if model is not None and not model.extension(nnf(lhs)) <= model.extension(nnf(rhs)):
                continue
            lines.append(f"(implies {lhs.key} {rhs.key})")
        kept += 1
    # nominals must be declared in the document to be known as individuals
    for o in noms:
        if not any(o in line for line in lines):
            lines.append(f"(instance {o} top)")
    text = "\n".join(lines) + "\n"
    return OntologyInstance(text, parse_ontology(text), planted, model)


@dataclass
class AlgebraicInstance:
    q: DecompositionSet
    pp: PricingProblem
    tbox: Tbox
    rolebox: RoleBox
    description: str


def random_algebraic_instance(seed: int, max_q: int = 8) -> AlgebraicInstance:
    """A random node label with its pricing problem, |Q| at most ``max_q``."""
    rng = random.Random(seed)
    while True:
        atoms = [Atom(a) for a in ATOMS[: rng.randint(2, 4)]]
        noms = [Nominal(o) for o in NOMINALS[: rng.randint(0, 3)]]
        names = atoms + noms
        roles = [Role(p) for p in ROLES[: rng.randint(1, 2)]]
        rb = RoleBox()
        for r in roles:
            rb.add_name(r.name)
        if len(roles) == 2 and rng.random() < 0.4:
            rb.add_subrole(roles[0], roles[1])
        axioms_text = []
        for _ in range(rng.randint(0, 3)):
            kind = rng.random()
            if kind < 0.4 and len(names) >= 2:
                group = rng.sample(names, rng.randint(2, min(3, len(names))))
                axioms_text.append("(disjoint " + " ".join(g.name for g in group) + ")")
            elif kind < 0.7:
                a, b = rng.sample(atoms, 2)
                axioms_text.append(f"(implies {a.key} {b.key})")
            elif len(names) >= 3:
                a = rng.choice(atoms)
                b, c = rng.sample([n for n in names if n != a], 2)
                axioms_text.append(f"(implies {a.key} (or {b.key} {c.key}))")
        doc = parse_ontology("\n".join(axioms_text) + "\n" + "".join(f"(instance {o.name} top)" for o in noms))
        drb = doc.rolebox()
        for r in roles:
            drb.add_name(r.name)
        for sub, sup in rb.pairs:
            drb.add_subrole(sub, sup)
        tbox = internalize(doc.axioms(), drb)

        label: list[Concept] = []
        for _ in range(rng.randint(1, 4)):
            r = rng.choice(roles)
            if rng.random() < 0.25:
                r = r.inv()
            filler = rng.choice(names)
            if rng.random() < 0.2 and len(atoms) >= 2:
                filler = conj(*rng.sample(atoms, 2))
            label.append(Some(r, filler))
        for _ in range(rng.randint(0, 2)):
            r = rng.choice(roles)
            if rng.random() < 0.25:
                r = r.inv()
            pool = noms if noms and rng.random() < 0.6 else names
            filler = disj(*rng.sample(pool, rng.randint(1, min(2, len(pool)))))
            label.append(All(r, filler))
        back = {}
        ctx = NodeContext()
        if rng.random() < 0.4:
            r = rng.choice(roles)
            back[1] = frozenset(drb.role_closure([r.inv() if rng.random() < 0.5 else r]))
            ctx.reuse_labels[1] = set(rng.sample(atoms, rng.randint(0, 2)))
        for o in noms:
            if rng.random() < 0.3:
                ctx.nominal_labels[o.name] = {o, *rng.sample(atoms, rng.randint(0, 1))}
        q = build_decomposition(sorted(set(label)), back, drb, {1: "y"})
        if q.size > max_q or q.size == 0:
            continue
        pp = build_pp(q, tbox, drb, ctx)
        desc = " ".join(c.key for c in sorted(set(label))) + " | " + " ".join(axioms_text)
        return AlgebraicInstance(q, pp, tbox, drb, desc)
