"""Concept and role data model for SHOI.

Concepts are immutable and hash-consed through their canonical rendering, so
structural equality is a string comparison and labels can be plain sets.
n-ary ``And``/``Or`` are built through :func:`conj` / :func:`disj`, which
flatten, deduplicate and sort their children.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class Concept:
    """Base class. Subclasses set ``key`` (canonical s-expression) on init."""

    __slots__ = ("key", "_hash")

    def _init_key(self, key: str) -> None:
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "_hash", hash((type(self).__name__, key)))

    def __setattr__(self, name, value):
        raise AttributeError("concepts are immutable")

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Concept") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return self.key

    def __str__(self) -> str:
        return self.key

    def children(self) -> tuple["Concept", ...]:
        return ()


class _Top(Concept):
    __slots__ = ()

    def __init__(self) -> None:
        self._init_key("top")


class _Bottom(Concept):
    __slots__ = ()

    def __init__(self) -> None:
        self._init_key("bottom")


TOP = _Top()
BOTTOM = _Bottom()


class Atom(Concept):
    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        object.__setattr__(self, "name", name)
        self._init_key(name)


class Nominal(Concept):
    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        object.__setattr__(self, "name", name)
        self._init_key(f"(oneof {name})")


class Not(Concept):
    __slots__ = ("arg",)

    def __init__(self, arg: Concept) -> None:
        object.__setattr__(self, "arg", arg)
        self._init_key(f"(not {arg.key})")

    def children(self):
        return (self.arg,)


class And(Concept):
    __slots__ = ("args",)

    def __init__(self, args: Iterable[Concept]) -> None:
        args = tuple(args)
        if len(args) < 2:
            raise ValueError("And needs at least two children; use conj()")
        object.__setattr__(self, "args", args)
        self._init_key("(and " + " ".join(a.key for a in args) + ")")

    def children(self):
        return self.args


class Or(Concept):
    __slots__ = ("args",)

    def __init__(self, args: Iterable[Concept]) -> None:
        args = tuple(args)
        if len(args) < 2:
            raise ValueError("Or needs at least two children; use disj()")
        object.__setattr__(self, "args", args)
        if all(type(a) is Nominal for a in args):
            key = "(oneof " + " ".join(a.name for a in args) + ")"
        else:
            key = "(or " + " ".join(a.key for a in args) + ")"
        self._init_key(key)

    def children(self):
        return self.args


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverted: bool = False

    def inv(self) -> "Role":
        return Role(self.name, not self.inverted)

    @property
    def key(self) -> str:
        return f"(inv {self.name})" if self.inverted else self.name

    def __str__(self) -> str:
        return self.name + ("-" if self.inverted else "")

    def __repr__(self) -> str:
        return str(self)


class Some(Concept):
    __slots__ = ("role", "filler")

    def __init__(self, role: Role, filler: Concept) -> None:
        object.__setattr__(self, "role", role)
        object.__setattr__(self, "filler", filler)
        self._init_key(f"(some {role.key} {filler.key})")

    def children(self):
        return (self.filler,)


class All(Concept):
    __slots__ = ("role", "filler")

    def __init__(self, role: Role, filler: Concept) -> None:
        object.__setattr__(self, "role", role)
        object.__setattr__(self, "filler", filler)
        self._init_key(f"(all {role.key} {filler.key})")

    def children(self):
        return (self.filler,)


def _flatten(kind: type, items: Iterable[Concept]) -> Iterator[Concept]:
    for c in items:
        if type(c) is kind:
            yield from c.args
        else:
            yield c


def conj(*items: Concept) -> Concept:
    """Canonical conjunction: flattened, deduplicated, sorted; ⊤ dropped."""
    if len(items) == 1 and not isinstance(items[0], Concept):
        items = tuple(items[0])
    parts = set()
    for c in _flatten(And, items):
        if c is BOTTOM or c == BOTTOM:
            return BOTTOM
        if c != TOP:
            parts.add(c)
    if not parts:
        return TOP
    if len(parts) == 1:
        return parts.pop()
    return And(sorted(parts))


def disj(*items: Concept) -> Concept:
    """Canonical disjunction: flattened, deduplicated, sorted; ⊥ dropped."""
    if len(items) == 1 and not isinstance(items[0], Concept):
        items = tuple(items[0])
    parts = set()
    for c in _flatten(Or, items):
        if c == TOP:
            return TOP
        if c != BOTTOM:
            parts.add(c)
    if not parts:
        return BOTTOM
    if len(parts) == 1:
        return parts.pop()
    return Or(sorted(parts))


def one_of(*names: str) -> Concept:
    return disj(*(Nominal(n) for n in names))


def is_name(c: Concept) -> bool:
    """Atoms and nominals are the concept names of the logic."""
    return type(c) is Atom or type(c) is Nominal


def nnf(c: Concept) -> Concept:
    """Negation normal form; negation ends up only in front of names."""
    t = type(c)
    if t is Not:
        return _negate(c.arg)
    if t is And:
        return conj(*(nnf(a) for a in c.args))
    if t is Or:
        return disj(*(nnf(a) for a in c.args))
    if t is Some:
        return Some(c.role, nnf(c.filler))
    if t is All:
        return All(c.role, nnf(c.filler))
    return c


def _negate(c: Concept) -> Concept:
    t = type(c)
    if c == TOP:
        return BOTTOM
    if c == BOTTOM:
        return TOP
    if t is Atom or t is Nominal:
        return Not(c)
    if t is Not:
        return nnf(c.arg)
    if t is And:
        return disj(*(_negate(a) for a in c.args))
    if t is Or:
        return conj(*(_negate(a) for a in c.args))
    if t is Some:
        return All(c.role, _negate(c.filler))
    if t is All:
        return Some(c.role, _negate(c.filler))
    raise TypeError(f"unknown concept {c!r}")


def complement(c: Concept) -> Concept:
    """nnf(¬c)."""
    return _negate(c)


def closure(c: Concept) -> set[Concept]:
    """Smallest set containing ``c`` closed under sub-concepts and un-negation."""
    out: set[Concept] = set()
    todo = [c]
    while todo:
        d = todo.pop()
        if d in out:
            continue
        out.add(d)
        todo.extend(d.children())
    return out


def nominals_in(c: Concept) -> set[str]:
    return {d.name for d in closure(c) if type(d) is Nominal}


def names_in(c: Concept) -> set[Concept]:
    return {d for d in closure(c) if is_name(d)}


def roles_in(c: Concept) -> set[str]:
    return {d.role.name for d in closure(c) if type(d) in (Some, All)}


# ---------------------------------------------------------------------------
# Axioms and statements


@dataclass(frozen=True)
class Subsumption:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class Equivalence:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True)
class Disjointness:
    members: tuple[Concept, ...]


@dataclass(frozen=True)
class Transitivity:
    role: Role


@dataclass(frozen=True)
class SubRole:
    sub: Role
    sup: Role


@dataclass(frozen=True)
class ConceptAssertion:
    individual: str
    concept: Concept


@dataclass(frozen=True)
class RoleAssertion:
    subject: str
    object: str
    role: Role


def abox_to_tbox(assertions: Iterable) -> list[Subsumption]:
    out = []
    for a in assertions:
        if isinstance(a, ConceptAssertion):
            out.append(Subsumption(Nominal(a.individual), a.concept))
        elif isinstance(a, RoleAssertion):
            out.append(Subsumption(Nominal(a.subject), Some(a.role, Nominal(a.object))))
        else:
            raise TypeError(f"not an assertion: {a!r}")
    return out


# ---------------------------------------------------------------------------
# Role hierarchy


class UnknownRoleError(KeyError):
    pass


@dataclass
class RoleBox:
    names: set[str] = field(default_factory=set)
    transitive: set[str] = field(default_factory=set)
    pairs: set[tuple[Role, Role]] = field(default_factory=set)

    def __post_init__(self) -> None:
        self._star: dict[Role, frozenset[Role]] | None = None

    def add_name(self, name: str) -> None:
        if name not in self.names:
            self.names.add(name)
            self._star = None

    def add_subrole(self, sub: Role, sup: Role) -> None:
        self.add_name(sub.name)
        self.add_name(sup.name)
        self.pairs.add((sub, sup))
        self._star = None

    def add_transitive(self, role: Role) -> None:
        self.add_name(role.name)
        self.transitive.add(role.name)

    def all_roles(self) -> list[Role]:
        return [Role(n, inv) for n in sorted(self.names) for inv in (False, True)]

    def direct_pairs(self) -> set[tuple[Role, Role]]:
        """Declared pairs together with their inverse images."""
        out = set(self.pairs)
        out.update((r.inv(), s.inv()) for r, s in self.pairs)
        return out

    def _closure(self) -> dict[Role, frozenset[Role]]:
        if self._star is None:
            succ: dict[Role, set[Role]] = {r: set() for r in self.all_roles()}
            for r, s in self.direct_pairs():
                succ[r].add(s)
            star = {}
            for r in succ:
                seen = {r}
                todo = deque([r])
                while todo:
                    u = todo.popleft()
                    for v in succ[u]:
                        if v not in seen:
                            seen.add(v)
                            todo.append(v)
                star[r] = frozenset(seen)
            self._star = star
        return self._star

    def _check(self, r: Role) -> None:
        if r.name not in self.names:
            raise UnknownRoleError(r.name)

    def supers(self, r: Role) -> frozenset[Role]:
        """All S with r ⊑* S (including r)."""
        self._check(r)
        return self._closure()[r]

    def subsumes_star(self, r: Role, s: Role) -> bool:
        self._check(r)
        self._check(s)
        return s in self._closure()[r]

    def is_transitive(self, r: Role) -> bool:
        self._check(r)
        return r.name in self.transitive

    def role_closure(self, roles: Iterable[Role]) -> frozenset[Role]:
        out: set[Role] = set()
        for r in roles:
            out |= self.supers(r)
        return frozenset(out)


# ---------------------------------------------------------------------------
# Tbox internalization


@dataclass(frozen=True)
class NameAxiom:
    """A name-level axiom the pricing problem can encode.

    ``conjunctive``: lhs₁ ⊓ … ⊓ lhsₙ ⊑ rhs[0] (or ⊑ ⊥ when rhs is empty).
    otherwise: lhs[0] ⊑ rhs₁ ⊔ … ⊔ rhsₘ.
    """

    lhs: tuple[Concept, ...]
    rhs: tuple[Concept, ...]
    conjunctive: bool


@dataclass
class Tbox:
    gcis: list[Subsumption]
    equivalences: list[Equivalence]
    disjoint_groups: list[tuple[Concept, ...]]
    unfold: dict[Concept, Concept]
    c_t: Concept
    name_axioms: list[NameAxiom] = field(default_factory=list)
    nominals: list[str] = field(default_factory=list)
    individuals: list[str] = field(default_factory=list)

    def axioms(self) -> list:
        return [*self.gcis, *self.equivalences, *(Disjointness(g) for g in self.disjoint_groups)]


def _name_axioms(sub: Subsumption) -> list[NameAxiom]:
    lhs, rhs = sub.lhs, sub.rhs
    if is_name(lhs):
        lhs_names = (lhs,)
    elif type(lhs) is And and all(is_name(a) for a in lhs.args):
        lhs_names = lhs.args
    else:
        return []
    if rhs == BOTTOM:
        return [NameAxiom(lhs_names, (), True)]
    if is_name(rhs):
        return [NameAxiom(lhs_names, (rhs,), True)]
    if type(rhs) is And:
        return [NameAxiom(lhs_names, (a,), True) for a in rhs.args if is_name(a)]
    if type(rhs) is Or and len(lhs_names) == 1 and all(is_name(a) for a in rhs.args):
        return [NameAxiom(lhs_names, rhs.args, False)]
    return []


def internalize(axioms: Iterable, rolebox: RoleBox | None = None, lazy_unfolding: bool = True) -> Tbox:
    """Split axioms into lazily unfolded name definitions and C_T.

    With ``lazy_unfolding`` every axiom whose left side is a concept name
    (atom or nominal) is attached to that name; several such axioms for one
    name are conjoined.  A left side that is a disjunction of names is split
    first.  Disjointness pairs become ``X ⊑ ¬Y`` definitions.  Everything else
    is folded into C_T.
    """
    gcis: list[Subsumption] = []
    equivs: list[Equivalence] = []
    groups: list[tuple[Concept, ...]] = []
    for ax in axioms:
        if isinstance(ax, Subsumption):
            gcis.append(ax)
        elif isinstance(ax, Equivalence):
            equivs.append(ax)
        elif isinstance(ax, Disjointness):
            groups.append(tuple(ax.members))
        elif isinstance(ax, (ConceptAssertion, RoleAssertion)):
            gcis.extend(abox_to_tbox([ax]))
        elif isinstance(ax, (Transitivity, SubRole)):
            continue
        else:
            raise TypeError(f"unsupported axiom {ax!r}")

    plain: list[Subsumption] = list(gcis)
    for e in equivs:
        plain.append(Subsumption(e.lhs, e.rhs))
        plain.append(Subsumption(e.rhs, e.lhs))

    # Two-name conjunctions below bottom are disjointness statements.
    kept: list[Subsumption] = []
    for s in plain:
        lhs, rhs = nnf(s.lhs), nnf(s.rhs)
        if rhs == BOTTOM and type(lhs) is And and len(lhs.args) == 2 and all(is_name(a) for a in lhs.args):
            groups.append(lhs.args)
        else:
            kept.append(Subsumption(lhs, rhs))

    defs: dict[Concept, list[Concept]] = {}
    conjuncts: list[Concept] = []

    def define(name: Concept, d: Concept) -> None:
        defs.setdefault(name, []).append(d)

    asserted: dict[str, None] = {}
    for s in kept:
        lhs, rhs = s.lhs, s.rhs
        if lazy_unfolding and type(lhs) is Or and all(is_name(a) for a in lhs.args):
            for a in lhs.args:
                define(a, rhs)
        elif lazy_unfolding and is_name(lhs):
            define(lhs, rhs)
        elif lhs == TOP:
            conjuncts.append(rhs)
        else:
            conjuncts.append(nnf(disj(complement(lhs), rhs)))

    for g in groups:
        g = tuple(dict.fromkeys(g))
        for i, x in enumerate(g):
            for y in g[i + 1:]:
                if lazy_unfolding:
                    define(x, Not(y))
                    define(y, Not(x))
                else:
                    conjuncts.append(disj(Not(x), Not(y)))

    unfold = {name: nnf(conj(*ds)) for name, ds in defs.items()}
    c_t = nnf(conj(*conjuncts)) if conjuncts else TOP

    name_axioms: list[NameAxiom] = []
    for s in kept:
        if type(s.lhs) is Or and all(is_name(a) for a in s.lhs.args):
            for a in s.lhs.args:
                name_axioms.extend(_name_axioms(Subsumption(a, s.rhs)))
        else:
            name_axioms.extend(_name_axioms(s))

    noms: dict[str, None] = {}
    everything: list[Concept] = []
    for s in kept:
        everything += [s.lhs, s.rhs]
    for g in groups:
        everything += list(g)
    for c in everything:
        for d in sorted(closure(c)):
            if type(d) is Nominal:
                noms.setdefault(d.name, None)
    for s in kept:
        lhs = s.lhs
        for a in (lhs.args if type(lhs) is Or else (lhs,)):
            if type(a) is Nominal:
                asserted.setdefault(a.name, None)

    return Tbox(
        gcis=gcis,
        equivalences=equivs,
        disjoint_groups=[tuple(dict.fromkeys(g)) for g in groups],
        unfold=unfold,
        c_t=c_t,
        name_axioms=name_axioms,
        nominals=list(noms),
        individuals=list(asserted),
    )
