import itertools
from fractions import Fraction

import pytest

from hopfore.builtins import builtin
from hopfore.classic import (
    ExtensionType,
    FiberKind,
    NormalityVerdict,
    character_variety,
    classify_extension,
    commutator_normal_forms,
    goodearl_fiber,
    normality_search,
)
from hopfore.dsl import parse
from hopfore.errors import CharacterError, NormalityError, StepRangeError, UnknownGeneratorError
from hopfore.linalg import ConstraintKind
from hopfore.sampling import random_character
from hopfore.winding import Character, transport_character, validate_character

from conftest import ALL_BUILTINS


def test_usl2_commutators(usl2):
    rendered = [usl2.render(p) for p in commutator_normal_forms(usl2)]
    assert rendered == ["-2*e", "2*f", "-h"]


# ---------------------------------------------------------
# Character varieties
# ---------------------------------------------------------

def test_b_variety_is_a_line(b1):
    variety = character_variety(b1)
    assert variety.resolved
    assert variety.constraint("Y").kind is ConstraintKind.FIXED
    assert variety.constraint("Z").value == 0
    assert variety.free_names() == ["X"]
    assert variety.describe() == ["Y = 0", "X free", "Z = 0"]
    assert variety.contains([0, 7, 0])
    assert not variety.contains([1, 0, 0])


def test_usl2_has_only_the_counit(usl2):
    variety = character_variety(usl2)
    assert variety.free_names() == []
    assert [c.value for c in variety.constraints] == [0, 0, 0]


def test_commutative_variety_is_everything(heisenberg):
    assert character_variety(heisenberg).free_names() == ["y", "z", "x"]


def test_weyl_algebra_has_no_characters():
    weyl = parse("gen q\ngen p { delta: q -> 1 }")
    variety = character_variety(weyl)
    assert not variety.resolved
    assert variety.solution.inconsistent


# ---------------------------------------------------------
# Classification
# ---------------------------------------------------------

@pytest.mark.parametrize(
    "name, step, kind",
    [
        ("solv2-der", 2, ExtensionType.INVARIANT),
        ("solv2-auto", 2, ExtensionType.VARIANT),
        ("usl2", 2, ExtensionType.VARIANT),
        ("usl2", 3, ExtensionType.VARIANT),
        ("B(1)", 2, ExtensionType.INVARIANT),
        ("B(1)", 3, ExtensionType.VARIANT),
        ("A(1,1,1)", 3, ExtensionType.INVARIANT),
    ],
)
def test_classify_builtins(name, step, kind):
    result = classify_extension(builtin(name), step)
    assert result.kind is kind
    assert result.step == step
    assert result.reasons


def test_derivation_moving_the_counit_is_inconsistent():
    weyl = parse("gen q\ngen p { delta: q -> 1 }")
    result = classify_extension(weyl, 2)
    assert result.kind is ExtensionType.INCONSISTENT
    assert "delta moves q" in result.reasons[0]


def test_classify_first_step_is_out_of_range(usl2):
    with pytest.raises(StepRangeError):
        classify_extension(usl2, 1)


# ---------------------------------------------------------
# Fibers
# ---------------------------------------------------------

def test_automorphism_fiber_is_a_point(solv2_auto):
    fiber = goodearl_fiber(solv2_auto, 2, [3])
    assert fiber.kind is FiberKind.POINT
    assert fiber.extension == (3, 0)
    assert fiber.description == "<y - 3, x>"


@pytest.mark.parametrize("mu", [0, 1, -2, Fraction(7, 3)])
def test_automorphism_fibers_are_points_everywhere(solv2_auto, mu):
    tower = solv2_auto.tower
    fiber = goodearl_fiber(solv2_auto, 2, [mu])
    assert fiber.kind is FiberKind.POINT
    assert fiber.extension == (mu, 0)
    ideal = tower.render(tower.generator("y") - tower.constant(mu))
    assert fiber.description == f"<{ideal}, x>"


def test_derivation_fiber_over_zero_is_a_line(solv2_der):
    fiber = goodearl_fiber(solv2_der, 2, [0])
    assert fiber.kind is FiberKind.LINE
    assert fiber.description == "{<x, y - lambda> : lambda in Q}"


def test_derivation_fiber_elsewhere_is_empty(solv2_der):
    assert goodearl_fiber(solv2_der, 2, [Fraction(5, 2)]).kind is FiberKind.EMPTY


def test_usl2_fiber_over_the_counit(usl2):
    fiber = goodearl_fiber(usl2, 3, [0, 0])
    assert fiber.kind is FiberKind.POINT
    assert fiber.description == "<h, e, f>"


def test_fiber_needs_a_character(usl2):
    with pytest.raises(CharacterError):
        goodearl_fiber(usl2, 3, [0, 1])
    with pytest.raises(CharacterError):
        goodearl_fiber(usl2, 3, [0])


# ---------------------------------------------------------
# Normality
# ---------------------------------------------------------

@pytest.mark.parametrize("name", ["solv2-der", "solv2-auto"])
def test_solvable_ideal_is_normal(name):
    result = normality_search(builtin(name), ["x"], 3)
    assert result.verdict is NormalityVerdict.NORMAL
    assert result.hopf_ideal
    assert result.tests_run > 0


def test_heisenberg_ideals(heisenberg):
    assert normality_search(heisenberg, ["y"], 2).verdict is NormalityVerdict.NORMAL
    result = normality_search(heisenberg, ["x"], 2)
    assert result.verdict is NormalityVerdict.NOT_NORMAL
    assert not result.hopf_ideal


def test_b_ideal_is_a_hopf_ideal_but_not_normal(b1):
    result = normality_search(b1, ["Y", "Z"], 2)
    assert result.verdict is NormalityVerdict.NOT_NORMAL
    assert result.failed_test == "coaction_left"
    assert result.hopf_ideal
    assert result.witness.startswith("coaction_left(")


def test_normality_input_errors(usl2):
    with pytest.raises(NormalityError):
        normality_search(usl2, [], 2)
    with pytest.raises(NormalityError):
        normality_search(usl2, ["e"], 2)
    with pytest.raises(UnknownGeneratorError):
        normality_search(usl2, ["q"], 2)


def test_b_ideal_is_not_normal_up_to_degree_four(b1):
    result = normality_search(b1, ["Y", "Z"], 4)
    assert result.verdict is NormalityVerdict.NOT_NORMAL
    assert result.hopf_ideal
    assert result.max_deg == 4
    assert result.witness.startswith(f"{result.failed_test}(")
    assert result.witness_element is not None


# ---------------------------------------------------------
# Cross-checks
# ---------------------------------------------------------

FIBER_AT_COUNIT = {ExtensionType.INVARIANT: FiberKind.LINE, ExtensionType.VARIANT: FiberKind.POINT}


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_fiber_over_the_counit_matches_the_classification(name):
    ht = builtin(name)
    for i in range(2, ht.arity + 1):
        kind = classify_extension(ht, i).kind
        fiber = goodearl_fiber(ht, i, ht.counit_values[: i - 1])
        assert fiber.kind is FIBER_AT_COUNIT[kind]
        if fiber.kind is FiberKind.POINT:
            assert fiber.extension == ht.counit_values[:i]


@pytest.mark.parametrize("name", ["solv2-der", "solv2-auto", "B(1)"])
def test_fiber_kind_is_constant_along_windings(name, np_random):
    ht = builtin(name)
    i = ht.arity
    counit = Character.counit(ht)
    expected = goodearl_fiber(ht, i, ht.counit_values[: i - 1]).kind
    for _ in range(5):
        m = transport_character(counit, random_character(ht, np_random), ht)
        assert goodearl_fiber(ht, i, m.values[: i - 1]).kind is expected


GRID = [Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1)]


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_variety_matches_a_grid_search(name):
    ht = builtin(name)
    variety = character_variety(ht)
    assert variety.resolved
    hits = 0
    for values in itertools.product(GRID, repeat=ht.arity):
        passed = validate_character(Character.from_values(ht, values), ht).passed
        assert variety.contains(values) is passed
        hits += passed
    assert hits > 0
