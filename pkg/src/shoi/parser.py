"""Reader and writer for the ``.shoi`` s-expression ontology format.

    statement := (implies C C) | (equivalent C C) | (disjoint NAME+)
               | (transitive ROLE) | (subrole ROLE ROLE)
               | (instance IND C) | (related IND IND ROLE)
    C         := NAME | top | bottom | (not C) | (and C C+) | (or C C+)
               | (some ROLE C) | (all ROLE C) | (oneof IND+)
    ROLE      := NAME | (inv NAME)

``;`` starts a comment.  A bare NAME denotes a nominal when that name is used
as an individual anywhere in the document, otherwise an atomic concept.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .concepts import (
    BOTTOM,
    TOP,
    All,
    And,
    Atom,
    Concept,
    ConceptAssertion,
    Disjointness,
    Equivalence,
    Nominal,
    Not,
    Or,
    Role,
    RoleAssertion,
    RoleBox,
    Some,
    Subsumption,
    SubRole,
    Transitivity,
    conj,
    disj,
)

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")
_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")

STATEMENT_HEADS = ("implies", "equivalent", "disjoint", "transitive", "subrole", "instance", "related")
KEYWORDS = {"top", "bottom", "not", "and", "or", "some", "all", "oneof", "inv", *STATEMENT_HEADS}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class _Sexp:
    items: list
    line: int
    col: int


@dataclass
class _Atom:
    text: str
    line: int
    col: int


@dataclass
class OntologyDocument:
    statements: list = field(default_factory=list)
    positions: list[tuple[int, int]] = field(default_factory=list)

    def rolebox(self) -> RoleBox:
        rb = RoleBox()
        for s in self.statements:
            for name in _role_names(s):
                rb.add_name(name)
            if isinstance(s, Transitivity):
                rb.add_transitive(s.role)
            elif isinstance(s, SubRole):
                rb.add_subrole(s.sub, s.sup)
        return rb

    def axioms(self) -> list:
        return [s for s in self.statements if not isinstance(s, (Transitivity, SubRole))]

    def individuals(self) -> list[str]:
        out: dict[str, None] = {}
        for s in self.statements:
            for c in _concepts_of(s):
                for n in _nominal_names(c):
                    out.setdefault(n, None)
            if isinstance(s, ConceptAssertion):
                out.setdefault(s.individual, None)
            elif isinstance(s, RoleAssertion):
                out.setdefault(s.subject, None)
                out.setdefault(s.object, None)
        return list(out)


def _nominal_names(c: Concept):
    stack = [c]
    while stack:
        d = stack.pop()
        if type(d) is Nominal:
            yield d.name
        stack.extend(d.children())


def _concepts_of(s) -> list[Concept]:
    if isinstance(s, (Subsumption, Equivalence)):
        return [s.lhs, s.rhs]
    if isinstance(s, Disjointness):
        return list(s.members)
    if isinstance(s, ConceptAssertion):
        return [s.concept]
    return []


def _role_names(s) -> set[str]:
    out = set()
    if isinstance(s, Transitivity):
        out.add(s.role.name)
    elif isinstance(s, SubRole):
        out |= {s.sub.name, s.sup.name}
    elif isinstance(s, RoleAssertion):
        out.add(s.role.name)
    for c in _concepts_of(s):
        stack = [c]
        while stack:
            d = stack.pop()
            if type(d) in (Some, All):
                out.add(d.role.name)
            stack.extend(d.children())
    return out


def _tokenize(text: str):
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if not tok.isspace() and not tok.startswith(";"):
            yield tok, line, col
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)


def _read(text: str) -> list[_Sexp]:
    stack: list[_Sexp] = []
    top: list[_Sexp] = []
    last = (1, 1)
    for tok, line, col in _tokenize(text):
        last = (line, col)
        if tok == "(":
            stack.append(_Sexp([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            if stack:
                stack[-1].items.append(done)
            else:
                top.append(done)
        else:
            if not stack:
                raise ParseError(f"expected '(' but found {tok!r}", line, col)
            stack[-1].items.append(_Atom(tok, line, col))
    if stack:
        s = stack[-1]
        raise ParseError("unbalanced '(' (missing ')')", s.line, s.col)
    del last
    return top


class _Builder:
    def __init__(self, individuals: set[str]) -> None:
        self.individuals = individuals

    def name(self, x, what: str = "name") -> str:
        if not isinstance(x, _Atom):
            raise ParseError(f"expected {what}", x.line, x.col)
        if not IDENT.fullmatch(x.text) or x.text in KEYWORDS:
            raise ParseError(f"invalid {what} {x.text!r}", x.line, x.col)
        return x.text

    def role(self, x) -> Role:
        if isinstance(x, _Sexp):
            if len(x.items) != 2 or not isinstance(x.items[0], _Atom) or x.items[0].text != "inv":
                raise ParseError("expected role name or (inv NAME)", x.line, x.col)
            return Role(self.name(x.items[1], "role name"), True)
        return Role(self.name(x, "role name"))

    def concept(self, x) -> Concept:
        if isinstance(x, _Atom):
            if x.text == "top":
                return TOP
            if x.text == "bottom":
                return BOTTOM
            n = self.name(x, "concept")
            return Nominal(n) if n in self.individuals else Atom(n)
        if not x.items or not isinstance(x.items[0], _Atom):
            raise ParseError("expected concept constructor", x.line, x.col)
        head, args = x.items[0].text, x.items[1:]
        if head == "not":
            self._arity(x, args, 1)
            return Not(self.concept(args[0]))
        if head in ("and", "or"):
            if len(args) < 2:
                raise ParseError(f"({head} ...) needs at least two operands", x.line, x.col)
            parts = [self.concept(a) for a in args]
            return conj(*parts) if head == "and" else disj(*parts)
        if head in ("some", "all"):
            self._arity(x, args, 2)
            r = self.role(args[0])
            c = self.concept(args[1])
            return Some(r, c) if head == "some" else All(r, c)
        if head == "oneof":
            if not args:
                raise ParseError("(oneof ...) needs at least one individual", x.line, x.col)
            return disj(*(Nominal(self.name(a, "individual")) for a in args))
        raise ParseError(f"unknown concept constructor {head!r}", x.line, x.col)

    @staticmethod
    def _arity(x: _Sexp, args: list, n: int) -> None:
        if len(args) != n:
            head = x.items[0].text
            raise ParseError(f"({head} ...) takes {n} argument(s), got {len(args)}", x.line, x.col)

    def statement(self, x: _Sexp):
        if not x.items or not isinstance(x.items[0], _Atom):
            raise ParseError("expected statement head", x.line, x.col)
        head, args = x.items[0].text, x.items[1:]
        if head == "implies":
            self._arity(x, args, 2)
            return Subsumption(self.concept(args[0]), self.concept(args[1]))
        if head == "equivalent":
            self._arity(x, args, 2)
            return Equivalence(self.concept(args[0]), self.concept(args[1]))
        if head == "disjoint":
            if not args:
                raise ParseError("(disjoint ...) needs at least one name", x.line, x.col)
            members = []
            for a in args:
                n = self.name(a)
                members.append(Nominal(n) if n in self.individuals else Atom(n))
            return Disjointness(tuple(members))
        if head == "transitive":
            self._arity(x, args, 1)
            return Transitivity(self.role(args[0]))
        if head == "subrole":
            self._arity(x, args, 2)
            return SubRole(self.role(args[0]), self.role(args[1]))
        if head == "instance":
            self._arity(x, args, 2)
            return ConceptAssertion(self.name(args[0], "individual"), self.concept(args[1]))
        if head == "related":
            self._arity(x, args, 3)
            return RoleAssertion(self.name(args[0], "individual"), self.name(args[1], "individual"), self.role(args[2]))
        raise ParseError(f"unknown statement {head!r}; expected one of {', '.join(STATEMENT_HEADS)}", x.line, x.col)


def _collect_individuals(forms: list[_Sexp]) -> set[str]:
    out: set[str] = set()
    stack = list(forms)
    while stack:
        x = stack.pop()
        if not isinstance(x, _Sexp) or not x.items or not isinstance(x.items[0], _Atom):
            if isinstance(x, _Sexp):
                stack.extend(x.items)
            continue
        head = x.items[0].text
        if head == "oneof":
            out.update(a.text for a in x.items[1:] if isinstance(a, _Atom))
        elif head == "instance" and len(x.items) > 1 and isinstance(x.items[1], _Atom):
            out.add(x.items[1].text)
        elif head == "related":
            out.update(a.text for a in x.items[1:3] if isinstance(a, _Atom))
        stack.extend(i for i in x.items[1:] if isinstance(i, _Sexp))
    return out


def parse_ontology(text: str) -> OntologyDocument:
    forms = _read(text)
    builder = _Builder(_collect_individuals(forms))
    doc = OntologyDocument()
    for f in forms:
        doc.statements.append(builder.statement(f))
        doc.positions.append((f.line, f.col))
    return doc


def parse_concept(text: str, individuals: set[str] | frozenset = frozenset()) -> Concept:
    """Parse a single concept expression."""
    text = text.strip()
    if text and text[0] != "(":
        tok = next(_tokenize(text))
        return _Builder(set(individuals)).concept(_Atom(*tok))
    forms = _read(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one concept", 1, 1)
    names = set(individuals) | _collect_individuals(forms)
    return _Builder(names).concept(forms[0])


def render_concept(c: Concept) -> str:
    return c.key


def render_role(r: Role) -> str:
    return r.key


def render_statement(s) -> str:
    if isinstance(s, Subsumption):
        return f"(implies {s.lhs.key} {s.rhs.key})"
    if isinstance(s, Equivalence):
        return f"(equivalent {s.lhs.key} {s.rhs.key})"
    if isinstance(s, Disjointness):
        return "(disjoint " + " ".join(m.name for m in s.members) + ")"
    if isinstance(s, Transitivity):
        return f"(transitive {s.role.key})"
    if isinstance(s, SubRole):
        return f"(subrole {s.sub.key} {s.sup.key})"
    if isinstance(s, ConceptAssertion):
        return f"(instance {s.individual} {s.concept.key})"
    if isinstance(s, RoleAssertion):
        return f"(related {s.subject} {s.object} {s.role.key})"
    raise TypeError(f"not a statement: {s!r}")


def render_document(doc: OntologyDocument) -> str:
    return "".join(render_statement(s) + "\n" for s in doc.statements)


__all__ = [
    "OntologyDocument",
    "ParseError",
    "parse_concept",
    "parse_ontology",
    "render_concept",
    "render_document",
    "render_role",
    "render_statement",
]
