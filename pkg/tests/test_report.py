import json

import jsonschema
import pytest

from hopfore.builtins import builtin
from hopfore.cli import main
from hopfore.dsl import parse, serialize
from hopfore.hopf import GK_BASIS, check_hoe_conditions, check_hopf_axioms
from hopfore.ore_core import validate_tower
from hopfore.properties import PROPERTIES
from hopfore.report import CITATIONS, CheckResult, Report, Status, cite, combine_status, load_schema
from hopfore.winding import S4_BASIS

from conftest import ALL_BUILTINS


@pytest.mark.parametrize(
    "name, citation",
    [
        ("hoe.derivation[Z;X]", "Thm 2.4(i)(e), Eq. (2.12)"),
        ("hoe.cocycle[x]", "Thm 2.4(i)(f), Eq. (2.13)"),
        ("hoe.antipode-tail[x]", "Thm 2.4(i)(f), Eq. (2.14)"),
        ("hoe.winding-left[f;h]", "Thm 2.4(i)(d), Eq. (2.11)"),
        ("hopf.coassociativity[x]", "Lemma 2.2"),
        ("hopf.primitive-dimension", "Thm 3.2(iii)"),
        ("antipode.order", "Thm 3.2(viii), Eq. (3.5)"),
        ("s4.winding[Z]", "Thm 3.2(ix)"),
        ("classify.consistency[Z]", "Thm 4.5"),
    ],
)
def test_citation_by_check_family(name, citation):
    assert cite(name) == citation
    assert CheckResult(name, Status.PASS, "basis").citation == citation


def test_explicit_citation_wins():
    check = CheckResult("hoe.cocycle[x]", Status.PASS, "basis", citation="Prop 2.7")
    assert check.citation == "Prop 2.7"
    assert CheckResult("custom.check", Status.PASS, "basis").citation is None


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_every_check_of_a_builtin_is_cited(name):
    ht = builtin(name)
    checks = [*validate_tower(ht.tower).checks, *check_hopf_axioms(ht).checks]
    for i in range(2, ht.arity + 1):
        checks.extend(check_hoe_conditions(ht, i).checks)
    missing = [c.name for c in checks if c.citation is None]
    assert not missing


def test_every_property_is_cited():
    for name in PROPERTIES:
        assert f"property.{name}" in CITATIONS


def test_failure_keeps_its_citation(b1):
    mutated = parse(serialize(b1).replace("delta: X -> Y\n", "delta: X -> Y^2\n"))
    failure = check_hoe_conditions(mutated, 3).failures[0]
    assert failure.citation == "Thm 2.4(i)(e), Eq. (2.12)"
    assert failure.to_dict()["citation"] == "Thm 2.4(i)(e), Eq. (2.12)"


def test_theorem_named_in_basis_text():
    assert "Thm 2.6" in GK_BASIS
    assert "Thm 3.2(ix)" in S4_BASIS


def test_json_checks_carry_citations(capsys):
    assert main(["check", "builtin:usl2", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, load_schema())
    by_name = {c["name"]: c["citation"] for c in report["checks"]}
    assert by_name["hoe.derivation[f;e]"] == "Thm 2.4(i)(e), Eq. (2.12)"
    assert by_name["hopf.primitive-dimension"] == "Thm 3.2(iii)"
    assert all(by_name.values())
    assert "Thm 2.6" in report["results"]["gk_basis"]


def test_s4_report_cites_its_theorem(capsys):
    assert main(["s4", "builtin:B(1)", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert {c["citation"] for c in report["checks"]} == {"Thm 3.2(ix)"}


def test_fail_dominates_unresolved():
    assert combine_status([Status.PASS, Status.UNRESOLVED, Status.FAIL]) is Status.FAIL
    assert combine_status([Status.PASS, Status.UNRESOLVED]) is Status.UNRESOLVED
    assert combine_status([]) is Status.PASS


def test_exit_code_follows_status():
    report = Report(command="check", algebra="a", input_digest="0" * 64)
    assert report.exit_code() == 0
    report.add_checks([CheckResult("antipode.order", Status.UNRESOLVED, "basis")])
    assert report.exit_code() == 3
    report.add_checks([CheckResult("hoe.cocycle[x]", Status.FAIL, "basis", witness="y ox 1")])
    assert report.exit_code() == 1
    assert report.summary() == {"pass": 0, "fail": 1, "unresolved": 1}
    assert "FAIL       hoe.cocycle[x]  [Thm 2.4(i)(f), Eq. (2.13)]  witness: y ox 1" in report.to_text()
