"""Hopf structure on a tower: coproduct, counit, antipode and their checks.

Each generator has the coproduct

    Delta(x_i) = x_i (x) 1 + 1 (x) x_i + w_i

with the tail ``w_i`` living in the tensor square of the generators before
``x_i``. Delta and the counit extend multiplicatively, the antipode
anti-multiplicatively. The group-like coefficient in front of ``1 (x) x_i``
is always 1, the only group-like of a tower built over the field.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Sequence

import sympy

from .errors import ArityError, DegreeBoundError, SupportError
from .linalg import (
    TriangularSolution,
    evaluate_symbolic,
    nullspace,
    solve_triangular,
    to_rational,
)
from .ore_core import (
    Monomial,
    NcPoly,
    Step,
    Tower,
    _accumulate,
    _prune,
    character_residuals,
    monomial_key,
    to_scalar,
)
from .report import AxiomReport, CheckResult, Status
from .tensor import (
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
)

log = logging.getLogger(__name__)


class HopfTower:
    """A tower with coproduct tails and counit values for its generators."""

    def __init__(
        self,
        tower: Tower,
        tails: Sequence[Tensor2] | None = None,
        counit_values: Sequence[Any] | None = None,
        *,
        name: str = "algebra",
    ) -> None:
        n = tower.arity
        tails = tuple(tails) if tails is not None else tuple(Tensor2.zero(n) for _ in range(n))
        if len(tails) != n:
            raise ArityError(f"{n} generators but {len(tails)} tails")
        for k, tail in enumerate(tails):
            if not isinstance(tail, Tensor2):
                raise TypeError(f"tail of {tower.names[k]} must be a Tensor2")
            if tail.arity != n:
                raise ArityError(f"tail of {tower.names[k]} has arity {tail.arity}, expected {n}")
            if tail.support() >= k:
                raise SupportError(
                    f"tail of {tower.names[k]} mentions {tower.names[tail.support()]}, "
                    f"which does not come before {tower.names[k]}"
                )
        values = tuple(to_scalar(v) for v in (counit_values or [0] * n))
        if len(values) != n:
            raise ArityError(f"{n} generators but {len(values)} counit values")
        self.tower = tower
        self.tails = tails
        self.counit_values = values
        self.name = name
        self._coproduct_monomial = lru_cache(maxsize=tower.cache_size)(self._fold_coproduct)
        self._antipode_monomial = lru_cache(maxsize=tower.cache_size)(self._fold_antipode)
        self._generator_antipode: dict[int, NcPoly] = {}

    @property
    def arity(self) -> int:
        return self.tower.arity

    @property
    def names(self) -> tuple[str, ...]:
        return self.tower.names

    def tail(self, i: int) -> Tensor2:
        return self.tails[self.tower.check_step(i)]

    def replace(self, **changes: Any) -> "HopfTower":
        return HopfTower(
            changes.get("tower", self.tower),
            changes.get("tails", self.tails),
            changes.get("counit_values", self.counit_values),
            name=changes.get("name", self.name),
        )

    def with_budget(self, rewrite_budget: int) -> "HopfTower":
        return self.replace(tower=self.tower.with_budget(rewrite_budget))

    def prefix(self, k: int) -> "HopfTower":
        """The Hopf subalgebra on the first ``k`` generators."""
        sub = self.tower.prefix(k)
        return HopfTower(
            sub,
            [t.restrict(k) for t in self.tails[:k]],
            self.counit_values[:k],
            name=f"{self.name}[:{k}]",
        )

    def render(self, value: NcPoly | Tensor2 | Tensor3) -> str:
        return value.render(self.names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HopfTower):
            return NotImplemented
        return (
            self.tower == other.tower
            and self.tails == other.tails
            and self.counit_values == other.counit_values
        )

    def __hash__(self) -> int:
        return hash((self.tower, self.tails, self.counit_values))

    def __repr__(self) -> str:
        return f"HopfTower({self.name}: {', '.join(self.names)})"

    # -- structure maps -------------------------------------------------------

    def generator_coproduct(self, k: int) -> Tensor2:
        x = self.tower.generator(k)
        one = self.tower.one()
        return Tensor2.outer(x, one) + Tensor2.outer(one, x) + self.tails[k]

    def _fold_coproduct(self, mono: Monomial) -> Tensor2:
        # Delta(x_1^e1 ... x_n^en) folded left to right, one generator at a time
        result = Tensor2.one(self.arity)
        for k, e in enumerate(mono):
            if e:
                delta = self.generator_coproduct(k)
                for _ in range(e):
                    result = t2_mul(result, delta, self.tower)
        return result

    def coproduct(self, p: NcPoly) -> Tensor2:
        acc: dict = {}
        for mono, c in p.terms.items():
            for key, c2 in self._coproduct_monomial(mono).terms.items():
                _accumulate(acc, key, c * c2)
        return Tensor2._wrap(self.arity, _prune(acc))

    def counit(self, p: NcPoly) -> Fraction:
        return p.evaluate(self.counit_values)

    def _antipode_generator(self, k: int) -> NcPoly:
        hit = self._generator_antipode.get(k)
        if hit is not None:
            return hit
        tower = self.tower
        # S(x) = eps(x) - x - sum w1 S(w2)
        result = tower.constant(self.counit_values[k]) - tower.generator(k)
        for (m1, m2), c in self.tails[k].terms.items():
            term = tower.mul(NcPoly.monomial(m1), self._antipode_monomial(m2))
            result = result - term.scale(c)
        self._generator_antipode[k] = result
        return result

    def _fold_antipode(self, mono: Monomial) -> NcPoly:
        # S(x_1^e1 ... x_n^en) = S(x_n)^en ... S(x_1)^e1
        result = self.tower.one()
        for k in reversed(range(self.arity)):
            if mono[k]:
                image = self._antipode_generator(k)
                for _ in range(mono[k]):
                    result = self.tower.mul(result, image)
        return result

    def clear_caches(self) -> None:
        self._coproduct_monomial.cache_clear()
        self._antipode_monomial.cache_clear()
        self.tower.clear_caches()

    def antipode(self, p: NcPoly) -> NcPoly:
        acc: dict[Monomial, Fraction] = {}
        for mono, c in p.terms.items():
            for m2, c2 in self._antipode_monomial(mono).terms.items():
                _accumulate(acc, m2, c * c2)
        return NcPoly._wrap(self.arity, _prune(acc))


def coproduct(p: NcPoly, ht: HopfTower) -> Tensor2:
    return ht.coproduct(p)


def counit(p: NcPoly, ht: HopfTower) -> Fraction:
    return ht.counit(p)


def antipode(p: NcPoly, ht: HopfTower) -> NcPoly:
    return ht.antipode(p)


def gk_dimension(ht: HopfTower) -> int:
    """Each Ore step raises the GK-dimension by one, so this is the arity.

    Provenance: GKdim R[x; sigma, delta] = GKdim R + 1 for these extensions (Thm 2.6),
    hence GK-dimension n for an n-step tower over k (Thm 3.2(ii)); see ``GK_BASIS``.
    """
    return ht.arity


GK_BASIS = "GK-dimension of an Ore extension is one more than that of its coefficient algebra (Thm 2.6; Thm 3.2(ii))"


# ---------------------------------------------------------------------------
# Hopf axioms
# ---------------------------------------------------------------------------

RELATION_BASIS = "Delta is an algebra map: it sends each defining relation to zero"
COASSOCIATIVITY_BASIS = "(Delta (x) Id) Delta = (Id (x) Delta) Delta on generators"
COUNIT_BASIS = "(eps (x) Id) Delta = Id = (Id (x) eps) Delta on generators"
ANTIPODE_BASIS = "mu (S (x) Id) Delta = eps = mu (Id (x) S) Delta on generators"
COUNIT_RELATION_BASIS = "eps is an algebra map: it vanishes on each defining relation"
ANTIPODE_RELATION_BASIS = "S is an anti-algebra map: it sends each defining relation to zero"


def check_hopf_axioms(ht: HopfTower) -> AxiomReport:
    """Hopf axioms on generators and defining relations.

    Delta, eps and S are determined by generator images, so verifying them on
    generators and on every relation covers the whole algebra.
    """
    report = AxiomReport(title="hopf")
    tower = ht.tower
    names = ht.names
    render = ht.render
    gens = [tower.generator(k) for k in range(ht.arity)]

    for j in range(1, ht.arity):
        step = tower.steps[j]
        dj = ht.coproduct(gens[j])
        for i in range(j):
            tag = f"{names[j]},{names[i]}"
            residual = (
                t2_mul(dj, ht.coproduct(gens[i]), tower)
                - t2_mul(ht.coproduct(step.sigma[i]), dj, tower)
                - ht.coproduct(step.delta[i])
            )
            report.add(CheckResult.from_residual(f"hopf.coproduct-relation[{tag}]", residual, render, RELATION_BASIS))

    for k, x in enumerate(gens):
        name = names[k]
        delta = ht.coproduct(x)
        eps = ht.counit_values[k]
        residual = embed_12(ht.coproduct, delta) - embed_23(ht.coproduct, delta)
        report.add(CheckResult.from_residual(f"hopf.coassociativity[{name}]", residual, render, COASSOCIATIVITY_BASIS))
        report.add(CheckResult.from_residual(
            f"hopf.counit-left[{name}]", contract_left(ht.counit, delta) - x, render, COUNIT_BASIS))
        report.add(CheckResult.from_residual(
            f"hopf.counit-right[{name}]", contract_right(ht.counit, delta) - x, render, COUNIT_BASIS))
        report.add(CheckResult.from_residual(
            f"hopf.antipode-left[{name}]", mu(lift_left(ht.antipode, delta), tower) - tower.constant(eps),
            render, ANTIPODE_BASIS))
        report.add(CheckResult.from_residual(
            f"hopf.antipode-right[{name}]", mu(lift_right(ht.antipode, delta), tower) - tower.constant(eps),
            render, ANTIPODE_BASIS))

    for j, i, value in character_residuals(tower, ht.counit_values):
        report.add(CheckResult.from_residual(
            f"hopf.counit-relation[{names[j]},{names[i]}]", tower.constant(value), render, COUNIT_RELATION_BASIS))

    for j in range(1, ht.arity):
        step = tower.steps[j]
        sj = ht.antipode(gens[j])
        for i in range(j):
            residual = (
                tower.mul(ht.antipode(gens[i]), sj)
                - tower.mul(sj, ht.antipode(step.sigma[i]))
                - ht.antipode(step.delta[i])
            )
            report.add(CheckResult.from_residual(
                f"hopf.antipode-relation[{names[j]},{names[i]}]", residual, render, ANTIPODE_RELATION_BASIS))

    log.info("hopf axioms for %s: %d checks, status %s", ht.name, len(report.checks), report.status.value)
    return report


# ---------------------------------------------------------------------------
# Hopf Ore extension identities
# ---------------------------------------------------------------------------

WINDING_BASIS = "sigma_i(r) = chi(r1) r2 with chi = eps o sigma_i (left winding form)"
RIGHT_WINDING_BASIS = "sigma_i(r) = r1 chi(r2) with chi = eps o sigma_i (right winding form)"
CHARACTER_BASIS = "chi = eps o sigma_i is an algebra map on the coefficient algebra"
DERIVATION_BASIS = "Delta delta(r) - delta(r1) (x) r2 - r1 (x) delta(r2) = w Delta(r) - Delta sigma(r) w"
COCYCLE_BASIS = "w (x) 1 + (Delta (x) Id)(w) = 1 (x) w + (Id (x) Delta)(w)"
ANTIPODE_TAIL_BASIS = "S(w1) w2 = w1 S(w2)"
AUGMENTATION_BASIS = "(eps (x) Id)(w) = -eps(x_i) = (Id (x) eps)(w); w in R+ (x) R+ when eps(x_i) = 0"


@dataclass
class HoeReport(AxiomReport):
    step: int = 0
    character: tuple[Fraction, ...] = ()


def check_hoe_conditions(ht: HopfTower, i: int) -> HoeReport:
    """Identities tying sigma_i, delta_i and the tail w_i together at step ``i``."""
    tower = ht.tower
    k = tower.check_step(i, lowest=2)
    names = ht.names
    render = ht.render
    step = tower.steps[k]
    w = ht.tails[k]
    chi = tuple(ht.counit(step.sigma[a]) for a in range(k))
    padded = chi + (Fraction(0),) * (ht.arity - k)
    report = HoeReport(title=f"hoe[{names[k]}]", step=i, character=chi)
    report.notes.append(
        "chi = eps o sigma: " + ", ".join(f"{names[a]} -> {v}" for a, v in enumerate(chi))
    )
    chi_of = lambda p: p.evaluate(padded)  # noqa: E731
    sigma = lambda p: tower.apply_endo(i, p)  # noqa: E731
    delta = lambda p: tower.apply_skew_derivation(i, p)  # noqa: E731

    for a in range(k):
        r = tower.generator(a)
        dr = ht.coproduct(r)
        tag = f"{names[k]};{names[a]}"
        report.add(CheckResult.from_residual(
            f"hoe.winding-left[{tag}]", step.sigma[a] - contract_left(chi_of, dr), render, WINDING_BASIS))
        report.add(CheckResult.from_residual(
            f"hoe.winding-right[{tag}]", step.sigma[a] - contract_right(chi_of, dr), render, RIGHT_WINDING_BASIS))

    bad = [(j, a, v) for j, a, v in character_residuals(tower, padded, upto=k) if v]
    if bad:
        j, a, v = bad[0]
        report.add(CheckResult(
            name=f"hoe.winding-character[{names[k]}]", status=Status.FAIL, basis=CHARACTER_BASIS,
            witness=f"relation {names[j]}*{names[a]} evaluates to {v}",
            residual=tower.constant(v),
        ))
    else:
        report.add(CheckResult(name=f"hoe.winding-character[{names[k]}]", status=Status.PASS, basis=CHARACTER_BASIS))

    for a in range(k):
        r = tower.generator(a)
        dr = ht.coproduct(r)
        lhs = ht.coproduct(step.delta[a]) - lift_left(delta, dr) - lift_right(delta, dr)
        rhs = t2_mul(w, dr, tower) - t2_mul(ht.coproduct(sigma(r)), w, tower)
        report.add(CheckResult.from_residual(
            f"hoe.derivation[{names[k]};{names[a]}]", lhs - rhs, render, DERIVATION_BASIS))

    cocycle = w.insert_one(2) + embed_12(ht.coproduct, w) - w.insert_one(0) - embed_23(ht.coproduct, w)
    report.add(CheckResult.from_residual(f"hoe.cocycle[{names[k]}]", cocycle, render, COCYCLE_BASIS))

    antipode_tail = mu(lift_left(ht.antipode, w), tower) - mu(lift_right(ht.antipode, w), tower)
    report.add(CheckResult.from_residual(f"hoe.antipode-tail[{names[k]}]", antipode_tail, render, ANTIPODE_TAIL_BASIS))

    shift = tower.constant(ht.counit_values[k])
    report.add(CheckResult.from_residual(
        f"hoe.augmentation-left[{names[k]}]", contract_left(ht.counit, w) + shift, render, AUGMENTATION_BASIS))
    report.add(CheckResult.from_residual(
        f"hoe.augmentation-right[{names[k]}]", contract_right(ht.counit, w) + shift, render, AUGMENTATION_BASIS))

    log.info("hoe identities for %s step %d: status %s", ht.name, i, report.status.value)
    return report


# ---------------------------------------------------------------------------
# Primitive elements
# ---------------------------------------------------------------------------

def monomials_up_to(arity: int, max_deg: int) -> list[Monomial]:
    """Non-constant PBW monomials of total degree at most ``max_deg``, degree-lex ascending."""
    monos = [
        m for m in itertools.product(range(max_deg + 1), repeat=arity)
        if 0 < sum(m) <= max_deg
    ]
    return sorted(monos, key=monomial_key)


def primitives(ht: HopfTower, max_deg: int) -> list[NcPoly]:
    """Basis of the primitive elements of total degree at most ``max_deg``.

    Complete only inside the degree bound.
    """
    if max_deg < 1:
        raise DegreeBoundError(f"degree bound must be at least 1, got {max_deg}")
    tower = ht.tower
    columns = monomials_up_to(ht.arity, max_deg)
    rows: dict[Any, dict[int, Fraction]] = {}
    counit_row: dict[int, Fraction] = {}
    for col, mono in enumerate(columns):
        p = NcPoly.monomial(mono)
        defect = ht.coproduct(p) - Tensor2.outer(p, tower.one()) - Tensor2.outer(tower.one(), p)
        for key, c in defect.terms.items():
            rows.setdefault(key, {})[col] = c
        value = ht.counit(p)
        if value:
            counit_row[col] = value
    equations = list(rows.values()) + ([counit_row] if counit_row else [])
    basis = [
        NcPoly(ht.arity, {columns[c]: v for c, v in enumerate(vector) if v})
        for vector in nullspace(equations, len(columns))
    ]
    log.info("primitives of %s up to degree %d: dimension %d", ht.name, max_deg, len(basis))
    return basis


PRIMITIVE_BOUNDS_BASIS = "min{2, GKdim} <= dim P(H) <= GKdim, and P(H) lies in the span of the generators"


def primitive_dimension_bounds(
    ht: HopfTower, max_deg: int, basis: Sequence[NcPoly] | None = None
) -> CheckResult:
    """Compare the primitive space found up to ``max_deg`` with the dimension bounds."""
    if basis is None:
        basis = primitives(ht, max_deg)
    n = ht.arity
    low = min(2, n)
    dim = len(basis)
    if low <= dim <= n and all(p.degree() <= 1 for p in basis):
        return CheckResult(name="hopf.primitive-dimension", status=Status.PASS, basis=PRIMITIVE_BOUNDS_BASIS,
                           detail=f"{low} <= {dim} <= {n}")
    outside = next((p for p in basis if p.degree() > 1), None)
    witness = ht.render(outside) if outside is not None else f"dimension {dim} outside {low}..{n}"
    return CheckResult(name="hopf.primitive-dimension", status=Status.FAIL, basis=PRIMITIVE_BOUNDS_BASIS,
                       witness=witness)


# ---------------------------------------------------------------------------
# Antipode order and S^4
# ---------------------------------------------------------------------------

def antipode_power(p: NcPoly, m: int, ht: HopfTower) -> NcPoly:
    if m < 0:
        raise ValueError("antipode power must be non-negative")
    for _ in range(m):
        p = ht.antipode(p)
    return p


class OrderVerdict(str, Enum):
    INVOLUTIVE = "S^2 = Id"
    INFINITE = "infinite"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class AntipodeOrder:
    verdict: OrderVerdict
    generator: str | None = None
    increment: NcPoly | None = None
    checked_up_to: int = 0
    detail: str = ""


def antipode_order(ht: HopfTower, max_m: int) -> AntipodeOrder:
    """Decide between ``S^2 = Id`` and infinite order.

    At the first generator not fixed by S^2, with a = S^2(x) - x, the powers
    S^(2m)(x) = x + m*a are verified for m up to ``max_m``; a nonzero linear
    increment means infinite order in characteristic 0.
    """
    if max_m < 1:
        raise DegreeBoundError(f"max_m must be at least 1, got {max_m}")
    tower = ht.tower
    for k in range(ht.arity):
        x = tower.generator(k)
        s2 = antipode_power(x, 2, ht)
        if s2 == x:
            continue
        a = s2 - x
        current = s2
        for m in range(2, max_m + 1):
            current = antipode_power(current, 2, ht)
            if current != x + a.scale(m):
                detail = f"S^{2 * m}({ht.names[k]}) = {ht.render(current)} breaks the linear pattern"
                log.warning("antipode order of %s undecided: %s", ht.name, detail)
                return AntipodeOrder(OrderVerdict.UNDECIDED, ht.names[k], a, m - 1, detail)
        log.info("antipode of %s has infinite order, witness %s", ht.name, ht.names[k])
        return AntipodeOrder(
            OrderVerdict.INFINITE, ht.names[k], a, max_m,
            f"S^(2m)({ht.names[k]}) = {ht.names[k]} + m*({ht.render(a)}) for 1 <= m <= {max_m}",
        )
    return AntipodeOrder(OrderVerdict.INVOLUTIVE, checked_up_to=1, detail="S^2 fixes every generator")


@dataclass
class S4Decomposition:
    resolved: bool
    character: tuple[Fraction, ...] | None
    solution: TriangularSolution | None = None
    diagnostics: list[str] = field(default_factory=list)


def _s4_rhs_exact(ht: HopfTower, x: NcPoly, chi: Sequence[Fraction]) -> NcPoly:
    double = embed_12(ht.coproduct, ht.coproduct(x))
    inner = double.contract_slot(2, lambda q: ht.antipode(q).evaluate(chi))
    return inner.contract_slot(0, lambda q: q.evaluate(chi))


def s4_decompose(ht: HopfTower) -> S4Decomposition:
    """Find chi with S^4 = tau_left(chi) o tau_right(chi o S) on generators.

    On a generator this reads S^4(x) = (chi (x) Id (x) chi o S)(Delta (x) Id)Delta(x);
    its coefficients together with the character conditions form a
    polynomial system in the unknowns chi(x_1), ..., chi(x_n).
    """
    tower = ht.tower
    unknowns = tuple(sympy.Symbol(f"chi_{name}") for name in ht.names)
    equations: list[Any] = []
    antipode_values: dict[Monomial, Any] = {}
    for k in range(ht.arity):
        x = tower.generator(k)
        target = antipode_power(x, 4, ht)
        double = embed_12(ht.coproduct, ht.coproduct(x))
        acc: dict[Monomial, Any] = {}
        for (m1, m2, m3), c in double.terms.items():
            if m3 not in antipode_values:
                antipode_values[m3] = evaluate_symbolic(ht.antipode(NcPoly.monomial(m3)), unknowns)
            value = to_rational(c) * evaluate_symbolic(NcPoly.monomial(m1), unknowns) * antipode_values[m3]
            acc[m2] = acc.get(m2, 0) + value
        for mono in set(acc) | set(target.terms):
            equations.append(sympy.expand(acc.get(mono, 0) - to_rational(target.coefficient(mono))))
    for _, _, value in character_residuals(
        tower, unknowns, evaluate=lambda p: evaluate_symbolic(p, unknowns)
    ):
        equations.append(sympy.expand(value))

    solution = solve_triangular(equations, unknowns)
    diagnostics = list(solution.trace)
    if not solution.resolved:
        diagnostics.append(
            f"{len(solution.residual)} equations are not affine in a single unknown after substitution"
        )
        log.warning("S^4 decomposition of %s unresolved", ht.name)
        return S4Decomposition(False, None, solution, diagnostics)

    chi = tuple(solution.point(Fraction(0)))
    for k in range(ht.arity):
        x = tower.generator(k)
        if antipode_power(x, 4, ht) != _s4_rhs_exact(ht, x, chi):
            diagnostics.append(f"candidate fails the exact check at {ht.names[k]}")
            return S4Decomposition(False, None, solution, diagnostics)
    if any(v for _, _, v in character_residuals(tower, chi)):
        diagnostics.append("candidate is not a character")
        return S4Decomposition(False, None, solution, diagnostics)
    log.info("S^4 decomposition of %s: chi = %s", ht.name, chi)
    return S4Decomposition(True, chi, solution, diagnostics)


# ---------------------------------------------------------------------------
# Change of variable
# ---------------------------------------------------------------------------

def _shift_generator(p: NcPoly, k: int, lam: Fraction) -> NcPoly:
    """Substitute ``x_k -> x_k - lam``; scalars commute, so PBW order survives."""
    if not lam:
        return p
    acc: dict[Monomial, Fraction] = {}
    for mono, c in p.terms.items():
        e = mono[k]
        for t in range(e + 1):
            coeff = c * comb(e, t) * (-lam) ** (e - t)
            exps = list(mono)
            exps[k] = t
            _accumulate(acc, tuple(exps), coeff)
    return NcPoly._wrap(p.arity, _prune(acc))


def change_variable(ht: HopfTower, i: int, lam: Any) -> HopfTower:
    """Present the same Hopf algebra with ``x_i`` replaced by ``x_i + lam``.

    delta_i becomes delta_i + lam*(Id - sigma_i); later images and tails are
    rewritten in the new variable; the new tail is w_i - lam*(1 (x) 1).
    """
    tower = ht.tower
    k = tower.check_step(i)
    lam = to_scalar(lam)
    if not lam:
        return ht
    one = tower.one()
    shift = lambda p: _shift_generator(p, k, lam)  # noqa: E731

    steps: list[Step] = list(tower.steps[:k])
    old = tower.steps[k]
    steps.append(Step(
        sigma=old.sigma,
        sigma_inv=old.sigma_inv,
        delta=tuple(
            d + (tower.generator(a) - s).scale(lam)
            for a, (s, d) in enumerate(zip(old.sigma, old.delta))
        ),
    ))
    for step in tower.steps[k + 1:]:
        sigma = [shift(p) for p in step.sigma]
        sigma_inv = [shift(p) for p in step.sigma_inv]
        sigma[k] = sigma[k] + one.scale(lam)
        sigma_inv[k] = sigma_inv[k] + one.scale(lam)
        steps.append(Step(tuple(sigma), tuple(sigma_inv), tuple(shift(p) for p in step.delta)))

    tails = list(ht.tails)
    tails[k] = tails[k] - Tensor2.one(ht.arity).scale(lam)
    for j in range(k + 1, ht.arity):
        tails[j] = tails[j].map_slot(0, shift).map_slot(1, shift)
    values = list(ht.counit_values)
    values[k] += lam

    new_tower = Tower(tower.names, steps, rewrite_budget=tower.rewrite_budget)
    log.info("change of variable on %s: %s -> %s + %s", ht.name, ht.names[k], ht.names[k], lam)
    return HopfTower(new_tower, tails, values, name=ht.name)


def counit_normalize(ht: HopfTower) -> HopfTower:
    """Shift every generator into the augmentation ideal."""
    for k in range(ht.arity):
        value = ht.counit_values[k]
        if value:
            ht = change_variable(ht, k + 1, -value)
    return ht
