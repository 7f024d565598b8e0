"""Seeded random inputs for the property suite and the tests.

Every sampler takes a ``numpy.random.Generator`` so runs are reproducible from
one seed.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

import numpy as np

from .classic import VarietyDescription, character_variety
from .hopf import HopfTower
from .linalg import ConstraintKind, to_fraction, to_rational
from .ore_core import Const, Expr, Gen, NcPoly, Power, Product, Step, Sum, Tower
from .tensor import Tensor2
from .winding import Character

log = logging.getLogger(__name__)

DENOMINATORS = (1, 1, 1, 2, 3)
TOWER_NAMES = ("a", "b", "c")


def random_rational(np_rng: np.random.Generator, bound: int = 3, *, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(int(np_rng.integers(-bound, bound + 1)), int(np_rng.choice(DENOMINATORS)))
        if value or not nonzero:
            return value


def random_word(names: Sequence[str], length: int, np_rng: np.random.Generator) -> list[str]:
    if not names:
        return []
    return [names[int(i)] for i in np_rng.integers(0, len(names), size=length)]


def random_expression(
    names: Sequence[str],
    np_rng: np.random.Generator,
    *,
    max_deg: int = 5,
    max_terms: int = 3,
) -> Expr:
    """A sum of scaled words in arbitrary generator order, occasionally with a power."""
    terms: list[Expr] = []
    for _ in range(int(np_rng.integers(1, max_terms + 1))):
        length = int(np_rng.integers(0, max_deg + 1))
        factors: list[Expr] = [Const(random_rational(np_rng, nonzero=True))]
        word = random_word(names, length, np_rng)
        if len(word) >= 2 and np_rng.random() < 0.2:
            # the first two letters become a square
            factors.append(Power(Gen(word[0]), 2))
            word = word[2:]
        factors.extend(Gen(name) for name in word)
        terms.append(Product(tuple(factors)))
    return Sum(tuple(terms))


def random_poly(tower: Tower, np_rng: np.random.Generator, *, max_deg: int = 3, max_terms: int = 3) -> NcPoly:
    return tower.normal_form(random_expression(tower.names, np_rng, max_deg=max_deg, max_terms=max_terms))


def random_character(
    ht: HopfTower,
    np_rng: np.random.Generator,
    variety: VarietyDescription | None = None,
) -> Character:
    """A random rational point of the character variety.

    Falls back to the counit when the variety is not fully resolved.
    """
    variety = variety or character_variety(ht)
    if not variety.resolved:
        log.warning("character variety of %s unresolved; sampling the counit", ht.name)
        return Character.counit(ht)
    solution = variety.solution
    free = {
        s: to_rational(random_rational(np_rng))
        for s, c in solution.constraints.items()
        if c.kind is ConstraintKind.FREE
    }
    values = []
    for s, c in zip(solution.unknowns, variety.constraints):
        if c.kind is ConstraintKind.FIXED:
            values.append(c.value)
        elif c.kind is ConstraintKind.FREE:
            values.append(to_fraction(free[s]))
        else:
            values.append(to_fraction(c.expression.subs(free)))
    return Character.from_values(ht, values)


def _random_commutative(base: Tower, np_rng: np.random.Generator, max_deg: int) -> NcPoly:
    return random_poly(base, np_rng, max_deg=max_deg, max_terms=2)


def random_tower(np_rng: np.random.Generator, *, max_arity: int = 3, max_deg: int = 2) -> HopfTower:
    """A valid tower whose only non-trivial step is the last one.

    The earlier generators commute. The last step is either a derivation with
    arbitrary images, or an affine automorphism x -> s*x + c together with
    the inner sigma-derivation r -> q*(r - sigma(r)).
    """
    n = int(np_rng.integers(1, max_arity + 1))
    names = TOWER_NAMES[:n]
    k = n - 1
    base = Tower(names[:k], [Step.trivial(a, k) for a in range(k)])
    sigma: list[NcPoly] = []
    sigma_inv: list[NcPoly] = []
    delta: list[NcPoly] = []
    if k and np_rng.random() < 0.5:
        q = _random_commutative(base, np_rng, max_deg - 1)
        for a in range(k):
            x = base.generator(a)
            s = Fraction(int(np_rng.choice((1, -1, 2))))
            c = random_rational(np_rng)
            image = x.scale(s) + base.constant(c)
            sigma.append(image)
            sigma_inv.append((x - base.constant(c)).scale(1 / s))
            delta.append(base.mul(q, x - image))
    else:
        for a in range(k):
            x = base.generator(a)
            sigma.append(x)
            sigma_inv.append(x)
            delta.append(_random_commutative(base, np_rng, max_deg))

    steps = [Step.trivial(a, n) for a in range(k)]
    steps.append(
        Step(
            sigma=tuple(p.extend(n) for p in sigma),
            sigma_inv=tuple(p.extend(n) for p in sigma_inv),
            delta=tuple(p.extend(n) for p in delta),
        )
    )
    tails = [Tensor2.zero(n) for _ in range(n)]
    if k and np_rng.random() < 0.5:
        left = random_poly(base, np_rng, max_deg=1, max_terms=2)
        right = random_poly(base, np_rng, max_deg=1, max_terms=2)
        tails[k] = Tensor2.outer(left, right).extend(n)
    counit_values = [Fraction(0)] * n
    if np_rng.random() < 0.25:
        counit_values[k] = random_rational(np_rng)
    return HopfTower(Tower(names, steps), tails, counit_values, name=f"random-{n}")
