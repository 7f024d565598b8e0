import dataclasses
from fractions import Fraction
from math import comb

import pytest

from hopfore.builtins import builtin
from hopfore.dsl import parse, serialize
from hopfore.errors import DegreeBoundError, StepRangeError, SupportError
from hopfore.hopf import (
    HopfTower,
    OrderVerdict,
    antipode_order,
    antipode_power,
    change_variable,
    check_hoe_conditions,
    check_hopf_axioms,
    counit_normalize,
    gk_dimension,
    primitive_dimension_bounds,
    primitives,
    s4_decompose,
)
from hopfore.ore_core import NcPoly, Tower, validate_tower
from hopfore.report import Status
from hopfore.sampling import random_poly
from hopfore.tensor import Tensor2, contract_right, embed_12, embed_23, lift_left, lift_right, mu, t2_mul

from conftest import ALL_BUILTINS


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_builtins_satisfy_the_hopf_axioms(name):
    report = check_hopf_axioms(builtin(name))
    assert report.status is Status.PASS, [c.name for c in report.failures]


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_builtins_satisfy_the_extension_identities(name):
    ht = builtin(name)
    for i in range(2, ht.arity + 1):
        report = check_hoe_conditions(ht, i)
        assert report.status is Status.PASS, [c.name for c in report.failures]


def test_hoe_character_of_usl2(usl2):
    report = check_hoe_conditions(usl2, 3)
    assert report.character == (Fraction(2), Fraction(0))
    assert report.step == 3


def test_hoe_needs_a_coefficient_algebra(usl2):
    with pytest.raises(StepRangeError):
        check_hoe_conditions(usl2, 1)


def test_derivation_not_matching_the_tail(b1):
    # delta_Z(X) = Y^2 is still a sigma-derivation, but X is primitive and Y^2 is not
    mutated = parse(serialize(b1).replace("delta: X -> Y\n", "delta: X -> Y^2\n"))
    assert validate_tower(mutated.tower).passed
    report = check_hoe_conditions(mutated, 3)
    assert [c.name for c in report.failures] == ["hoe.derivation[Z;X]"]
    assert report.failures[0].witness == "2*Y ox Y"


def test_corrupted_tail_breaks_the_counit(heisenberg):
    tower = heisenberg.tower
    tails = list(heisenberg.tails)
    tails[2] = tails[2] + Tensor2.outer(tower.generator("y"), tower.one())
    report = check_hopf_axioms(heisenberg.replace(tails=tails))
    failed = {c.name for c in report.failures}
    assert "hopf.counit-right[x]" in failed
    assert "hopf.coassociativity[x]" in failed


def test_tail_may_only_use_earlier_generators(heisenberg):
    tower = heisenberg.tower
    tails = list(heisenberg.tails)
    tails[1] = Tensor2.outer(tower.generator("x"), tower.generator("y"))
    with pytest.raises(SupportError):
        heisenberg.replace(tails=tails)


@pytest.mark.parametrize("name", ["heisenberg", "usl2", "B(1)", "A(1,1,1)"])
def test_coproduct_is_multiplicative(name, np_random):
    ht = builtin(name)
    tower = ht.tower
    for _ in range(10):
        p = random_poly(tower, np_random, max_deg=2, max_terms=2)
        q = random_poly(tower, np_random, max_deg=2, max_terms=2)
        assert ht.coproduct(tower.mul(p, q)) == t2_mul(ht.coproduct(p), ht.coproduct(q), tower)


def test_heisenberg_antipode(heisenberg):
    tower = heisenberg.tower
    x, y, z = (tower.generator(n) for n in ("x", "y", "z"))
    assert heisenberg.antipode(x) == tower.mul(y, z) - x
    assert heisenberg.antipode(y) == -y


def test_high_degree_antipode_and_coproduct(heisenberg):
    y = NcPoly.monomial((1000, 0, 0))
    assert heisenberg.antipode(y) == y
    delta = heisenberg.coproduct(y)
    assert len(delta) == 1001
    assert delta.terms[((500, 0, 0), (500, 0, 0))] == comb(1000, 500)


def test_b_antipode_moves_z(b1):
    tower = b1.tower
    y, z = tower.generator("Y"), tower.generator("Z")
    assert b1.antipode(z) == y - z
    assert antipode_power(z, 2, b1) == z - y.scale(2)
    assert antipode_power(z, 4, b1) == z - y.scale(4)


def test_a_antipode(a001):
    z = a001.tower.generator("Z")
    assert a001.antipode(z) == -z


def test_antipode_is_anti_multiplicative(usl2, np_random):
    tower = usl2.tower
    for _ in range(10):
        p = random_poly(tower, np_random, max_deg=2)
        q = random_poly(tower, np_random, max_deg=2)
        assert usl2.antipode(tower.mul(p, q)) == tower.mul(usl2.antipode(q), usl2.antipode(p))


@pytest.mark.parametrize("name", ["heisenberg", "usl2", "B(1)", "A(1,1,0)"])
def test_coassociativity_on_random_elements(name, np_random):
    ht = builtin(name)
    for _ in range(10):
        delta = ht.coproduct(random_poly(ht.tower, np_random, max_deg=3, max_terms=2))
        assert embed_12(ht.coproduct, delta) == embed_23(ht.coproduct, delta)


@pytest.mark.parametrize("name", ["heisenberg", "usl2", "B(1)", "A(1,1,0)"])
def test_counit_and_antipode_axioms_on_random_elements(name, np_random):
    ht = builtin(name)
    tower = ht.tower
    for _ in range(10):
        p = random_poly(tower, np_random, max_deg=3, max_terms=2)
        unit = tower.constant(ht.counit(p))
        assert ht.counit(ht.antipode(p)) == ht.counit(p)
        delta = ht.coproduct(p)
        assert mu(lift_left(ht.antipode, delta), tower) == unit
        assert mu(lift_right(ht.antipode, delta), tower) == unit


def test_flipped_heisenberg_tail_is_still_a_hopf_algebra(heisenberg):
    tower = heisenberg.tower
    tails = list(heisenberg.tails)
    tails[2] = Tensor2.outer(tower.generator("z"), tower.generator("y"))
    flipped = heisenberg.replace(tails=tails)
    assert check_hopf_axioms(flipped).passed
    assert check_hoe_conditions(flipped, 3).passed


def test_counit_is_zero_on_generators(usl2):
    for name in usl2.names:
        assert usl2.counit(usl2.tower.generator(name)) == 0
    assert usl2.counit(usl2.tower.constant(Fraction(3, 2))) == Fraction(3, 2)


# ---------------------------------------------------------
# Primitives
# ---------------------------------------------------------

def test_heisenberg_primitives(heisenberg):
    tower = heisenberg.tower
    basis = primitives(heisenberg, 2)
    assert set(basis) == {tower.generator("y"), tower.generator("z")}


def test_usl2_generators_are_primitive(usl2):
    basis = primitives(usl2, 2)
    assert len(basis) == 3
    assert all(p.degree() == 1 for p in basis)


def test_a000_primitives():
    ht = builtin("A(0,0,0)")
    basis = primitives(ht, 2)
    assert set(basis) == {ht.tower.generator("Y"), ht.tower.generator("X")}


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_primitive_dimension_bounds(name):
    check = primitive_dimension_bounds(builtin(name), 2)
    assert check.status is Status.PASS


def test_primitive_degree_bound_is_positive(usl2):
    with pytest.raises(DegreeBoundError):
        primitives(usl2, 0)


def test_gk_dimension(usl2):
    assert gk_dimension(usl2) == 3
    assert gk_dimension(builtin("k")) == 0


# ---------------------------------------------------------
# Antipode order and S^4
# ---------------------------------------------------------

@pytest.mark.parametrize("name", ["heisenberg", "usl2", "solv2-der", "A(0,0,1)"])
def test_involutive_antipodes(name):
    assert antipode_order(builtin(name), 4).verdict is OrderVerdict.INVOLUTIVE


def test_b_antipode_has_infinite_order(b1):
    order = antipode_order(b1, 10)
    assert order.verdict is OrderVerdict.INFINITE
    assert order.generator == "Z"
    assert order.increment == b1.tower.generator("Y").scale(-2)
    assert order.checked_up_to == 10


@pytest.mark.parametrize("m", range(1, 11))
def test_b_even_antipode_powers_shift_z(b1, m):
    tower = b1.tower
    z = tower.generator("Z")
    assert antipode_power(z, 2 * m, b1) - z == tower.generator("Y").scale(-2 * m)


def test_b_antipode_order_does_not_depend_on_lambda():
    order = antipode_order(builtin("B(0)"), 4)
    assert order.verdict is OrderVerdict.INFINITE
    assert order.generator == "Z"


def test_antipode_order_bound(b1):
    with pytest.raises(DegreeBoundError):
        antipode_order(b1, 0)


def test_s4_decomposition_of_b1(b1):
    found = s4_decompose(b1)
    assert found.resolved
    assert found.character == (Fraction(0), Fraction(-2), Fraction(0))


def test_s4_decomposition_of_an_involutive_algebra(usl2):
    found = s4_decompose(usl2)
    assert found.resolved
    assert found.character == (0, 0, 0)


# ---------------------------------------------------------
# Change of variable
# ---------------------------------------------------------

def test_change_variable_keeps_the_axioms(b1):
    shifted = change_variable(b1, 2, Fraction(3, 2))
    assert shifted.counit_values == (0, Fraction(3, 2), 0)
    assert check_hopf_axioms(shifted).passed
    for i in (2, 3):
        assert check_hoe_conditions(shifted, i).passed


def test_change_variable_on_the_last_generator(usl2):
    shifted = change_variable(usl2, 3, 1)
    assert shifted.tail(3) == Tensor2.one(3).scale(-1)
    assert check_hopf_axioms(shifted).passed
    assert check_hoe_conditions(shifted, 3).passed


def test_change_variable_shifts_the_derivation(usl2):
    tower = usl2.tower
    # delta_f + (Id - sigma_f): h -> 0 + (h - (h + 2)), e -> -h + (e - e)
    shifted = change_variable(usl2, 3, 1)
    assert shifted.tower.steps[2].delta == (tower.constant(-2), -tower.generator("h"))
    assert shifted.tower.steps[2].sigma == tower.steps[2].sigma


def test_heisenberg_change_variable_keeps_the_axioms(heisenberg):
    shifted = change_variable(heisenberg, 3, 5)
    assert validate_tower(shifted.tower).passed
    assert check_hopf_axioms(shifted).passed
    assert check_hoe_conditions(shifted, 3).passed


def test_counit_normalize_undoes_a_shift(b1):
    shifted = change_variable(b1, 1, -2)
    assert shifted != b1
    assert counit_normalize(shifted) == b1


def test_change_variable_by_zero_is_identity(usl2):
    assert change_variable(usl2, 2, 0) is usl2


def test_prefix_is_a_hopf_subalgebra(b1):
    sub = b1.prefix(2)
    assert isinstance(sub, HopfTower)
    assert sub.names == ("Y", "X")
    assert check_hopf_axioms(sub).passed


# ---------------------------------------------------------
# Mutation sensitivity
# ---------------------------------------------------------

def _all_checks(ht):
    checks = [*validate_tower(ht.tower).checks, *check_hopf_axioms(ht).checks]
    for i in range(2, ht.arity + 1):
        checks.extend(check_hoe_conditions(ht, i).checks)
    return checks


def _with_top_step(ht, **images):
    steps = list(ht.tower.steps)
    steps[-1] = dataclasses.replace(steps[-1], **images)
    return ht.replace(tower=Tower(ht.names, steps))


def _flip_sigma(ht):
    # negate the image of the first generator, in sigma and its inverse alike
    step = ht.tower.steps[-1]
    return _with_top_step(
        ht,
        sigma=(-step.sigma[0], *step.sigma[1:]),
        sigma_inv=(-step.sigma_inv[0], *step.sigma_inv[1:]),
    )


def _perturb_delta(ht):
    # a primitive perturbation would survive, so add a square
    step = ht.tower.steps[-1]
    x = ht.tower.generator(0)
    return _with_top_step(ht, delta=(step.delta[0] + ht.tower.mul(x, x), *step.delta[1:]))


def _corrupt_tail(ht):
    tails = list(ht.tails)
    tails[-1] = tails[-1] + Tensor2.outer(ht.tower.generator(0), ht.tower.one())
    return ht.replace(tails=tails)


MUTATIONS = {
    "sigma-flip": _flip_sigma,
    "delta-perturbation": _perturb_delta,
    "tail-corruption": _corrupt_tail,
}


@pytest.mark.parametrize("mutation", sorted(MUTATIONS))
@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_single_mutations_are_caught(name, mutation):
    mutated = MUTATIONS[mutation](builtin(name))
    failures = [c for c in _all_checks(mutated) if c.status is Status.FAIL]
    assert failures
    for check in failures:
        assert check.residual is not None
        assert not check.residual.is_zero()
    first = failures[0]
    assert first.witness == mutated.render(first.residual)


@pytest.mark.parametrize("name", ALL_BUILTINS)
def test_corrupted_tail_moves_the_right_counit(name):
    mutated = _corrupt_tail(builtin(name))
    tower = mutated.tower
    x = tower.generator(mutated.arity - 1)
    residual = contract_right(mutated.counit, mutated.coproduct(x)) - x
    assert residual == tower.generator(0)
    failed = {c.name: c for c in check_hopf_axioms(mutated).failures}
    assert failed[f"hopf.counit-right[{mutated.names[-1]}]"].residual == residual


@pytest.mark.parametrize("name", ["heisenberg", "usl2", "B(1)", "A(1,1,1)"])
def test_cocycle_fails_exactly_when_coassociativity_fails(name):
    ht = builtin(name)
    tower = ht.tower
    top = ht.names[-1]
    x = tower.generator(0)
    extras = [
        Tensor2.zero(ht.arity),
        Tensor2.outer(x, tower.one()),
        Tensor2.outer(x, x),
        Tensor2.outer(x, tower.mul(x, x)),
    ]
    verdicts = []
    for extra in extras:
        tails = list(ht.tails)
        tails[-1] = tails[-1] + extra
        mutated = ht.replace(tails=tails)
        coassociativity = next(
            c for c in check_hopf_axioms(mutated).checks if c.name == f"hopf.coassociativity[{top}]"
        )
        cocycle = next(
            c for c in check_hoe_conditions(mutated, mutated.arity).checks if c.name == f"hoe.cocycle[{top}]"
        )
        assert coassociativity.status is cocycle.status
        if not cocycle.passed:
            assert coassociativity.residual == cocycle.residual
        verdicts.append(cocycle.passed)
    assert verdicts == [True, False, True, False]
