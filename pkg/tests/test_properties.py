import numpy as np
import pytest

from hopfore.builtins import builtin
from hopfore.ore_core import validate_tower
from hopfore.properties import PROPERTIES, run_properties, run_property
from hopfore.report import Status
from hopfore.sampling import random_character, random_tower
from hopfore.tensor import Tensor2
from hopfore.winding import validate_character

from conftest import ALL_BUILTINS


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_property_suite_passes_on_builtins(name):
    report = run_properties(builtin(name), samples=10, seed=3)
    assert report.status is Status.PASS, [(c.name, c.witness) for c in report.failures]
    assert len(report.checks) == len(PROPERTIES)


def test_oracle_property_runs_many_cases(usl2):
    check = run_property("oracle", usl2, 120, np.random.default_rng(0))
    assert check.status is Status.PASS
    assert check.detail == "120 cases"
    assert check.name == "property.oracle[usl2]"


def test_suite_is_reproducible(b1):
    first = run_properties(b1, samples=5, seed=11, names=("associativity", "winding-left"))
    second = run_properties(b1, samples=5, seed=11, names=("associativity", "winding-left"))
    assert first.checks == second.checks


def test_counterexample_becomes_the_witness(heisenberg):
    tower = heisenberg.tower
    tails = list(heisenberg.tails)
    tails[2] = tails[2] + Tensor2.outer(tower.generator("y"), tower.one())
    broken = heisenberg.replace(tails=tails, name="broken")
    check = run_properties(broken, samples=20, seed=0, names=("antipode-axiom",)).checks[0]
    assert check.name == "property.antipode-axiom[broken]"
    assert check.status is Status.FAIL
    assert check.witness.startswith("p=")


def test_budget_exhaustion_is_unresolved(usl2):
    tight = usl2.with_budget(2)
    check = run_properties(tight, samples=20, seed=0, names=("oracle",)).checks[0]
    assert check.status is Status.UNRESOLVED


def test_random_towers_are_valid(np_random):
    for _ in range(20):
        ht = random_tower(np_random)
        assert ht.name == f"random-{ht.arity}"
        assert validate_tower(ht.tower).passed


def test_random_character_is_a_character(b1, np_random):
    for _ in range(10):
        chi = random_character(b1, np_random)
        assert validate_character(chi, b1).passed
        assert chi.values[0] == 0


def test_change_of_variable_keeps_failing_verdicts(heisenberg):
    tower = heisenberg.tower
    tails = list(heisenberg.tails)
    tails[2] = tails[2] + Tensor2.outer(tower.generator("y"), tower.one())
    broken = heisenberg.replace(tails=tails, name="broken")
    check = run_properties(broken, samples=6, seed=5, names=("change-variable",)).checks[0]
    assert check.status is Status.PASS
    assert check.citation == "§2.4"


@pytest.mark.parametrize("name", ["usl2", "B(1)"])
def test_antipode_and_winding_laws_over_many_cases(name):
    report = run_properties(builtin(name), samples=100, seed=9, names=("antipode-axiom", "winding-left"))
    assert report.status is Status.PASS
    assert [c.citation for c in report.checks] == ["Thm 2.4(i)(f)", "Thm 2.4(i)(d)"]
