"""Randomized property suite, reported as checks.

Each property draws its cases from one seeded generator and stops at the
first counterexample, which becomes the witness.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np

from .classic import character_variety
from .dsl import parse, serialize
from .errors import CharacterError, RewriteBudgetExceeded, WindingError
from .hopf import HopfTower, change_variable, check_hoe_conditions, check_hopf_axioms
from .ore_core import naive_normal_form, validate_tower
from .report import AxiomReport, CheckResult, Status
from .sampling import random_character, random_expression, random_poly, random_rational, random_tower
from .tensor import lift_left, mu, t2_mul
from .winding import convolve, tau_left, tau_right

log = logging.getLogger(__name__)

Case = Callable[[HopfTower, np.random.Generator], "str | None"]

ORACLE_BASIS = "the memoized engine and single-step word rewriting give the same normal form"
ASSOCIATIVITY_BASIS = "(pq)r = p(qr)"
COPRODUCT_BASIS = "Delta(pq) = Delta(p) Delta(q)"
ANTIPODE_BASIS = "mu (S (x) Id) Delta(p) = eps(p) 1"
WINDING_LEFT_BASIS = "tau_left(chi) o tau_left(psi) = tau_left(psi * chi)"
WINDING_RIGHT_BASIS = "tau_right(chi) o tau_right(psi) = tau_right(chi * psi)"
CHANGE_VARIABLE_BASIS = "x_i -> x_i + lambda presents the same Hopf algebra, so every verdict is kept"
ROUND_TRIP_BASIS = "parse(serialize(H)) = H on random towers"


def _oracle(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
    expr = random_expression(ht.names, np_rng, max_deg=5)
    fast = ht.tower.normal_form(expr)
    slow = naive_normal_form(expr, ht.tower)
    if fast != slow:
        return f"{expr}: engine {ht.render(fast)}, oracle {ht.render(slow)}"
    return None


def _associativity(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
    tower = ht.tower
    p, q, r = (random_poly(tower, np_rng, max_deg=2) for _ in range(3))
    lhs = tower.mul(tower.mul(p, q), r)
    rhs = tower.mul(p, tower.mul(q, r))
    if lhs != rhs:
        return f"p={ht.render(p)}, q={ht.render(q)}, r={ht.render(r)}: {ht.render(lhs - rhs)}"
    return None


def _coproduct(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
    tower = ht.tower
    p = random_poly(tower, np_rng, max_deg=2, max_terms=2)
    q = random_poly(tower, np_rng, max_deg=3 - max(p.degree(), 0), max_terms=2)
    residual = ht.coproduct(tower.mul(p, q)) - t2_mul(ht.coproduct(p), ht.coproduct(q), tower)
    if not residual.is_zero():
        return f"p={ht.render(p)}, q={ht.render(q)}: {ht.render(residual)}"
    return None


def _antipode(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
    tower = ht.tower
    p = random_poly(tower, np_rng, max_deg=3, max_terms=2)
    residual = mu(lift_left(ht.antipode, ht.coproduct(p)), tower) - tower.constant(ht.counit(p))
    if not residual.is_zero():
        return f"p={ht.render(p)}: {ht.render(residual)}"
    return None


def _winding(left: bool) -> Case:
    def case(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
        variety = character_variety(ht)
        chi = random_character(ht, np_rng, variety)
        psi = random_character(ht, np_rng, variety)
        if left:
            composite = tau_left(chi, ht).compose(tau_left(psi, ht))
            expected = tau_left(convolve(psi, chi, ht), ht)
        else:
            composite = tau_right(chi, ht).compose(tau_right(psi, ht))
            expected = tau_right(convolve(chi, psi, ht), ht)
        if composite != expected:
            return f"chi=({chi.render()}), psi=({psi.render()}): {'; '.join(composite.render())}"
        return None

    return case


def _verdicts(ht: HopfTower) -> tuple[str, ...]:
    statuses = [validate_tower(ht.tower).status, check_hopf_axioms(ht).status]
    statuses.extend(check_hoe_conditions(ht, i).status for i in range(2, ht.arity + 1))
    return tuple(s.value for s in statuses)


def _change_variable(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
    if not ht.arity:
        return None
    i = int(np_rng.integers(1, ht.arity + 1))
    lam = random_rational(np_rng, nonzero=True)
    before = _verdicts(ht)
    after = _verdicts(change_variable(ht, i, lam))
    if before != after:
        return f"{ht.names[i - 1]} -> {ht.names[i - 1]} + {lam}: verdicts {before} became {after}"
    return None


def _round_trip(ht: HopfTower, np_rng: np.random.Generator) -> str | None:
    tower = random_tower(np_rng)
    text = serialize(tower)
    if parse(text) != tower:
        return text.replace("\n", " ")
    return None


PROPERTIES: dict[str, tuple[Case, str]] = {
    "oracle": (_oracle, ORACLE_BASIS),
    "associativity": (_associativity, ASSOCIATIVITY_BASIS),
    "coproduct-multiplicative": (_coproduct, COPRODUCT_BASIS),
    "antipode-axiom": (_antipode, ANTIPODE_BASIS),
    "winding-left": (_winding(True), WINDING_LEFT_BASIS),
    "winding-right": (_winding(False), WINDING_RIGHT_BASIS),
    "change-variable": (_change_variable, CHANGE_VARIABLE_BASIS),
    "round-trip": (_round_trip, ROUND_TRIP_BASIS),
}


def run_property(name: str, ht: HopfTower, samples: int, np_rng: np.random.Generator) -> CheckResult:
    case, basis = PROPERTIES[name]
    label = f"property.{name}[{ht.name}]"
    for n in range(samples):
        try:
            witness = case(ht, np_rng)
        except RewriteBudgetExceeded as exc:
            return CheckResult(label, Status.UNRESOLVED, basis, detail=f"case {n}: {exc}")
        except (WindingError, CharacterError) as exc:
            return CheckResult(label, Status.FAIL, basis, witness=str(exc), detail=f"case {n}")
        if witness is not None:
            return CheckResult(label, Status.FAIL, basis, witness=witness, detail=f"case {n}")
    return CheckResult(label, Status.PASS, basis, detail=f"{samples} cases")


def run_properties(
    ht: HopfTower,
    samples: int,
    seed: int = 0,
    names: tuple[str, ...] | None = None,
) -> AxiomReport:
    """Run each named property (all by default) on ``samples`` seeded cases."""
    np_rng = np.random.default_rng(seed)
    report = AxiomReport(title="properties")
    for name in names or tuple(PROPERTIES):
        report.add(run_property(name, ht, samples, np_rng))
    log.info("property suite on %s, seed %d: %s", ht.name, seed, report.status.value)
    return report
