"""Generators for the benchmark ontology families.

All generators emit text in the ``.shoi`` grammar and parse it back, so the
returned document is exactly what a written file would load as.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .concepts import Atom, closure, nnf
from .parser import OntologyDocument, _concepts_of, parse_ontology

CA_PROVINCES = (
    "Ontario", "Quebec", "NovaScotia", "NewBrunswick", "Manitoba",
    "BritishColumbia", "PrinceEdwardIsland", "Saskatchewan", "Alberta", "NewfoundlandAndLabrador",
)
# Synthetic member names; the original axiom set was never published.
EU_MEMBERS = tuple(f"eu{i:02d}" for i in range(1, 29))

FAMILIES = {
    "ca_provinces": ("CA_Province", CA_PROVINCES, "extraProvince"),
    "eu_members": ("EU_Member", EU_MEMBERS, "extraMember"),
}


def worked_example_text() -> str:
    """The six-axiom Tbox with one individual used for the golden traces."""
    return resources.files("shoi").joinpath("data/worked_example.shoi").read_text(encoding="utf-8")


def worked_example() -> OntologyDocument:
    return parse_ontology(worked_example_text())


def testont_text(n: int, variant: str = "cons") -> str:
    if n < 1:
        raise ValueError("n must be at least 1")
    if variant not in ("cons", "incons"):
        raise ValueError(f"unknown variant {variant!r}")
    xs = [f"X{i}" for i in range(1, n + 1)]
    os_ = [f"o{i}" for i in range(1, n + 1)]
    some = " ".join(f"(some R {x})" for x in xs)
    lines = [
        f"; TestOnt-{'Cons' if variant == 'cons' else 'InCons'} with n = {n}",
        "(implies C (some (inv R) A))",
        f"(implies A (and {some} (all R (oneof {' '.join(os_)}))))",
    ]
    lines.append(f"(disjoint {' '.join(os_)})")
    lines.append(f"(disjoint {' '.join(xs)})")
    blocked = xs if variant == "incons" else xs[:-1]
    if blocked:
        lines.append(f"(disjoint C {' '.join(blocked)})")
    lines.append("(instance c C)")
    return "\n".join(lines) + "\n"


def gen_testont(n: int, variant: str = "cons") -> OntologyDocument:
    return parse_ontology(testont_text(n, variant))


def members_text(extra: int, family: str) -> str:
    if extra < 0:
        raise ValueError("extra must be non-negative")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    cls, names, prefix = FAMILIES[family]
    extras = [f"{prefix}{i}" for i in range(1, extra + 1)]
    lines = [f"; {family} with {extra} extra member(s)"]
    lines.append(f"(equivalent {cls} (oneof {' '.join(names)}))")
    everyone = list(names) + extras
    if len(everyone) > 1:
        lines.append(f"(disjoint {' '.join(everyone)})")
    for n in names:
        lines.append(f"(instance {n} {cls})")
    for e in extras:
        lines.append(f"(instance {e} {cls})")
    return "\n".join(lines) + "\n"


def gen_members(extra: int, family: str) -> OntologyDocument:
    return parse_ontology(members_text(extra, family))


@dataclass
class Metrics:
    axioms: int
    concepts: int
    individuals: int
    roles: int

    def as_dict(self) -> dict:
        return {"axioms": self.axioms, "concepts": self.concepts,
                "individuals": self.individuals, "roles": self.roles}


def metrics(doc: OntologyDocument) -> Metrics:
    names = set()
    for s in doc.statements:
        for c in _concepts_of(s):
            names |= {d for d in closure(nnf(c)) if isinstance(d, Atom)}
    return Metrics(
        axioms=len(doc.statements),
        concepts=len(names),
        individuals=len(doc.individuals()),
        roles=len(doc.rolebox().all_roles()) // 2,
    )
