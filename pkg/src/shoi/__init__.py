"""SHOI consistency checking with a tableau engine and an algebraic module."""

from .benchmarks import gen_members, gen_testont, metrics, worked_example
from .concepts import RoleBox, Tbox, internalize, nnf
from .parser import OntologyDocument, ParseError, parse_concept, parse_ontology, render_document
from .properties import verify_tableau_properties
from .tableau import CONSISTENT, GAVE_UP, INCONSISTENT, CheckOptions, CheckResult, check_consistency, check_document

__all__ = [
    "CONSISTENT",
    "GAVE_UP",
    "INCONSISTENT",
    "CheckOptions",
    "CheckResult",
    "OntologyDocument",
    "ParseError",
    "RoleBox",
    "Tbox",
    "check_consistency",
    "check_document",
    "gen_members",
    "gen_testont",
    "internalize",
    "parse_concept",
    "metrics",
    "nnf",
    "parse_ontology",
    "render_document",
    "verify_tableau_properties",
    "worked_example",
]
