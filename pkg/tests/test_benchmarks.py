import pytest

from shoi.benchmarks import (
    CA_PROVINCES,
    EU_MEMBERS,
    gen_members,
    gen_testont,
    members_text,
    metrics,
    testont_text as make_testont,
    worked_example,
)
from shoi.parser import parse_ontology, render_document
from shoi.tableau import CONSISTENT, INCONSISTENT, CheckOptions, check_document


def test_testont_metrics():
    doc = gen_testont(10)
    assert metrics(doc).as_dict() == {"axioms": 6, "concepts": 12, "individuals": 11, "roles": 1}
    assert len(doc.individuals()) == 11


def test_member_family_metrics():
    assert metrics(gen_members(0, "ca_provinces")).as_dict() == {
        "axioms": 12, "concepts": 1, "individuals": 10, "roles": 0}
    assert metrics(gen_members(1, "eu_members")).individuals == len(EU_MEMBERS) + 1
    assert len(CA_PROVINCES) == 10 and len(EU_MEMBERS) == 28


def test_worked_example_metrics():
    assert metrics(worked_example()).as_dict() == {"axioms": 8, "concepts": 5, "individuals": 3, "roles": 2}


def test_generated_text_round_trips():
    for text in (make_testont(4, "incons"), members_text(2, "ca_provinces")):
        doc = parse_ontology(text)
        assert parse_ontology(render_document(doc)).statements == doc.statements


@pytest.mark.parametrize("call", [
    lambda: gen_testont(0),
    lambda: gen_testont(3, "maybe"),
    lambda: gen_members(-1, "ca_provinces"),
    lambda: gen_members(1, "atlantis"),
])
def test_bad_arguments_raise(call):
    with pytest.raises(ValueError):
        call()


@pytest.mark.parametrize("family", ["ca_provinces", "eu_members"])
@pytest.mark.parametrize("extra,expected", [(0, CONSISTENT), (1, INCONSISTENT), (3, INCONSISTENT)])
def test_member_family_verdicts(family, extra, expected):
    assert check_document(gen_members(extra, family)).verdict == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 12, 16])
def test_testont_verdicts(n):
    opts = CheckOptions(timeout_s=60)
    assert check_document(gen_testont(n, "cons"), opts).verdict == CONSISTENT
    assert check_document(gen_testont(n, "incons"), opts).verdict == INCONSISTENT
