from fractions import Fraction

import pytest

from hopfore.errors import ArityError, SupportError
from hopfore.sampling import random_poly
from hopfore.tensor import (
    Tensor2,
    Tensor3,
    contract_left,
    contract_right,
    embed_12,
    embed_23,
    lift_left,
    lift_right,
    mu,
    t2_mul,
    t3_mul,
)


def test_outer_and_render(heisenberg):
    y, z = heisenberg.tower.generator("y"), heisenberg.tower.generator("z")
    t = Tensor2.outer(y + z, z)
    assert heisenberg.render(t) == "y ox z + z ox z"
    assert len(t) == 2


def test_render_order_of_a_tail(a001):
    assert a001.render(a001.tail(3)) == "-Y ox X + X ox Y"


def test_zero_terms_cancel(heisenberg):
    y = heisenberg.tower.generator("y")
    t = Tensor2.outer(y, y)
    assert (t - t).is_zero()
    assert t.scale(0).is_zero()
    assert t.scale(Fraction(1, 2)) + t.scale(Fraction(1, 2)) == t


def test_wrong_number_of_factors(heisenberg):
    y = heisenberg.tower.generator("y")
    with pytest.raises(ArityError):
        Tensor2.outer(y, y, y)
    with pytest.raises(ArityError):
        Tensor3(3, {((0, 0, 0), (0, 0, 0)): 1})


def test_orders_do_not_mix(heisenberg):
    one = Tensor2.one(heisenberg.arity)
    with pytest.raises(TypeError):
        one + Tensor3.one(heisenberg.arity)


def test_restrict_outside_support(heisenberg):
    x = heisenberg.tower.generator("x")
    with pytest.raises(SupportError):
        Tensor2.outer(x, x).restrict(2)


def test_slotwise_product_uses_the_relations(usl2):
    tower = usl2.tower
    f, e = tower.generator("f"), tower.generator("e")
    one = tower.one()
    product = t2_mul(Tensor2.outer(f, one), Tensor2.outer(e, f), tower)
    assert product == Tensor2.outer(tower.mul(f, e), f)
    assert usl2.render(product) == "e*f ox f - h ox f"


def test_mu_multiplies_the_slots(usl2):
    tower = usl2.tower
    f, e = tower.generator("f"), tower.generator("e")
    assert mu(Tensor2.outer(f, e), tower) == tower.mul(f, e)


def test_heisenberg_coproduct_is_coassociative(heisenberg):
    delta_x = heisenberg.coproduct(heisenberg.tower.generator("x"))
    left = embed_12(heisenberg.coproduct, delta_x)
    right = embed_23(heisenberg.coproduct, delta_x)
    assert isinstance(left, Tensor3)
    assert left == right
    assert len(left) == 6


def test_insert_one(heisenberg):
    tail = heisenberg.tail(3)
    assert tail.insert_one(2) == Tensor3.outer(
        heisenberg.tower.generator("y"), heisenberg.tower.generator("z"), heisenberg.tower.one()
    )


def test_counit_contractions_recover_the_element(usl2, np_random):
    for _ in range(20):
        p = random_poly(usl2.tower, np_random, max_deg=3)
        delta = usl2.coproduct(p)
        assert contract_left(usl2.counit, delta) == p
        assert contract_right(usl2.counit, delta) == p


def test_lifts_act_on_one_slot(b1):
    tower = b1.tower
    x, z = tower.generator("X"), tower.generator("Z")
    t = Tensor2.outer(x, z)
    doubled = lambda p: p.scale(2)  # noqa: E731
    assert lift_left(doubled, t) == t.scale(2)
    assert lift_right(b1.antipode, t) == Tensor2.outer(x, b1.antipode(z))


def _random_tensor(tower, np_random):
    return Tensor2.outer(
        random_poly(tower, np_random, max_deg=2, max_terms=2),
        random_poly(tower, np_random, max_deg=2, max_terms=2),
    ) + Tensor2.outer(random_poly(tower, np_random, max_deg=1), random_poly(tower, np_random, max_deg=1))


def test_slotwise_product_is_associative_with_unit(usl2, np_random):
    tower = usl2.tower
    one = Tensor2.one(usl2.arity)
    for _ in range(10):
        u, v, w = (_random_tensor(tower, np_random) for _ in range(3))
        assert t2_mul(t2_mul(u, v, tower), w, tower) == t2_mul(u, t2_mul(v, w, tower), tower)
        assert t2_mul(one, u, tower) == u
        assert t2_mul(u, one, tower) == u


def test_mu_of_separated_factors_is_the_product(b1, np_random):
    tower = b1.tower
    one = tower.one()
    for _ in range(10):
        a = random_poly(tower, np_random, max_deg=2)
        b = random_poly(tower, np_random, max_deg=2)
        separated = t2_mul(Tensor2.outer(a, one), Tensor2.outer(one, b), tower)
        assert separated == Tensor2.outer(a, b)
        assert mu(separated, tower) == tower.mul(a, b)


def test_lifts_compose(b1, np_random):
    tower = b1.tower
    for _ in range(5):
        u = _random_tensor(tower, np_random)
        twice = lift_left(b1.antipode, lift_left(b1.antipode, u))
        assert twice == lift_left(lambda p: b1.antipode(b1.antipode(p)), u)
        assert lift_left(b1.antipode, lift_right(b1.antipode, u)) == lift_right(b1.antipode, lift_left(b1.antipode, u))


def test_double_coproduct_is_multiplicative(usl2, np_random):
    tower = usl2.tower
    for _ in range(5):
        p = random_poly(tower, np_random, max_deg=2, max_terms=2)
        q = random_poly(tower, np_random, max_deg=2, max_terms=2)
        lhs = embed_12(usl2.coproduct, usl2.coproduct(tower.mul(p, q)))
        rhs = t3_mul(
            embed_12(usl2.coproduct, usl2.coproduct(p)),
            embed_12(usl2.coproduct, usl2.coproduct(q)),
            tower,
        )
        assert lhs == rhs


def test_slotwise_product_of_triples(heisenberg):
    tower = heisenberg.tower
    x, y, z = (tower.generator(n) for n in ("x", "y", "z"))
    one = tower.one()
    product = t3_mul(Tensor3.outer(x, one, y), Tensor3.outer(y, z, one), tower)
    assert product == Tensor3.outer(tower.mul(x, y), z, y)
    assert t3_mul(Tensor3.one(3), product, tower) == product
