"""Characters and maximal ideals of codimension one.

Covers the commutator ideal, the character variety of a tower, the
invariant/variant type of each extension step, the fiber of characters of
``H_(i)`` over a character of ``H_(i-1)``, and a bounded search for
normality of an ideal generated by a set of generators.

All solving happens over the rationals; the field is not algebraically
closed, so a variety described here is its set of rational points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Sequence

import sympy

from .errors import CharacterError, NormalityError
from .hopf import HopfTower, monomials_up_to
from .linalg import (
    Constraint,
    ConstraintKind,
    TriangularSolution,
    evaluate_symbolic,
    solve_triangular,
    to_rational,
)
from .ore_core import NcPoly, Tower, character_residuals, to_scalar
from .tensor import Tensor2, embed_12

log = logging.getLogger(__name__)

CLOSURE_NOTE = "solutions are described over the rationals; the algebraic closure is not modelled"


def _tower_of(obj: HopfTower | Tower) -> Tower:
    return obj.tower if isinstance(obj, HopfTower) else obj


def commutator_pairs(arity: int) -> list[tuple[int, int]]:
    """Positions ``(j, i)`` with ``i < j`` in the order commutators are reported."""
    return [(j, i) for j in range(1, arity) for i in range(j)]


def commutator_normal_forms(obj: HopfTower | Tower) -> list[NcPoly]:
    """Normal forms of ``[x_j, x_i] = x_j x_i - x_i x_j`` for every ``i < j``."""
    tower = _tower_of(obj)
    return [tower.commutator(j, i) for j, i in commutator_pairs(tower.arity)]


# ---------------------------------------------------------------------------
# Character variety
# ---------------------------------------------------------------------------

@dataclass
class VarietyDescription:
    names: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    solution: TriangularSolution
    note: str = CLOSURE_NOTE

    @property
    def resolved(self) -> bool:
        return self.solution.resolved

    def constraint(self, name: str) -> Constraint:
        return self.constraints[self.names.index(name)]

    def free_names(self) -> list[str]:
        return [n for n, c in zip(self.names, self.constraints) if c.kind is ConstraintKind.FREE]

    def describe(self) -> list[str]:
        lines = []
        labels = dict(zip(self.solution.unknowns, self.names))
        for name, c in zip(self.names, self.constraints):
            if c.kind in (ConstraintKind.FIXED, ConstraintKind.DEPENDENT):
                lines.append(f"{name} = {c.describe(labels)}")
            elif c.kind is ConstraintKind.FREE:
                lines.append(f"{name} free")
            else:
                lines.append(f"{name} unresolved")
        return lines

    def contains(self, values: Sequence[Any]) -> bool:
        """Whether an assignment satisfies every resolved constraint."""
        if not self.resolved:
            raise CharacterError("variety has unresolved constraints")
        values = [to_scalar(v) for v in values]
        subs = {s: to_rational(v) for s, v in zip(self.solution.unknowns, values)}
        for value, c in zip(values, self.constraints):
            if c.kind is ConstraintKind.FIXED and value != c.value:
                return False
            if c.kind is ConstraintKind.DEPENDENT and to_rational(value) != c.expression.subs(subs):
                return False
        return True


def character_variety(obj: HopfTower | Tower) -> VarietyDescription:
    """Rational characters, solved by substituting forced values in tower order."""
    tower = _tower_of(obj)
    unknowns = tuple(sympy.Symbol(name) for name in tower.names)
    equations = [
        value
        for _, _, value in character_residuals(
            tower, unknowns, evaluate=lambda p: evaluate_symbolic(p, unknowns)
        )
    ]
    solution = solve_triangular(equations, unknowns)
    constraints = tuple(solution.constraints[s] for s in unknowns)
    variety = VarietyDescription(tuple(tower.names), constraints, solution)
    log.info("character variety of %s: %s", ",".join(tower.names), "; ".join(variety.describe()))
    return variety


# ---------------------------------------------------------------------------
# Invariant / variant classification
# ---------------------------------------------------------------------------

class ExtensionType(str, Enum):
    INVARIANT = "Invariant"
    VARIANT = "Variant"
    INCONSISTENT = "Inconsistent"


@dataclass
class Classification:
    kind: ExtensionType
    step: int
    reasons: list[str] = field(default_factory=list)


def _commutator_condition(tower: Tower, i: int, m: Sequence[Fraction]) -> tuple[bool, str]:
    """Does ``delta_i`` send every commutator of earlier generators into ``ker m``?"""
    k = i - 1
    for b in range(1, k):
        for a in range(b):
            value = tower.apply_skew_derivation(i, tower.commutator(b, a)).evaluate(m)
            if value:
                return False, f"m(delta([{tower.names[b]},{tower.names[a]}])) = {value}"
    return True, "m(delta([R,R])) = 0"


def _padded(tower: Tower, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(values) + (Fraction(0),) * (tower.arity - len(values))


def classify_extension(ht: HopfTower, i: int) -> Classification:
    """Type of step ``i``, read off at the counit of the coefficient algebra."""
    tower = ht.tower
    k = tower.check_step(i, lowest=2)
    step = tower.steps[k]
    m = _padded(tower, ht.counit_values[:k])
    names = ht.names
    moved_by_sigma = [
        names[a] for a in range(k) if step.sigma[a].evaluate(m) != m[a]
    ]
    moved_by_delta = [names[a] for a in range(k) if step.delta[a].evaluate(m)]
    reasons: list[str] = []
    if not moved_by_sigma and not moved_by_delta:
        reasons.append("eps o sigma = eps and eps o delta = 0 on generators")
        kind = ExtensionType.INVARIANT
    elif not moved_by_sigma:
        reasons.append(f"sigma fixes the augmentation ideal but delta moves {', '.join(moved_by_delta)}")
        kind = ExtensionType.INCONSISTENT
    else:
        reasons.append(f"sigma moves the augmentation ideal at {', '.join(moved_by_sigma)}")
        holds, detail = _commutator_condition(tower, i, m)
        reasons.append(detail)
        kind = ExtensionType.VARIANT if holds else ExtensionType.INCONSISTENT
    log.info("step %d of %s: %s", i, ht.name, kind.value)
    return Classification(kind, i, reasons)


# ---------------------------------------------------------------------------
# Fibers
# ---------------------------------------------------------------------------

class FiberKind(str, Enum):
    LINE = "Line"
    POINT = "Point"
    EMPTY = "Empty"
    UNRESOLVED = "Unresolved"


@dataclass
class FiberResult:
    kind: FiberKind
    step: int
    base: tuple[Fraction, ...]
    shift: Fraction | None = None
    extension: tuple[Fraction, ...] | None = None
    description: str = ""
    diagnostics: list[str] = field(default_factory=list)


FIBER_BASIS = "fibers over a character are a line when it is (sigma,delta)-invariant, otherwise at most one point"


def _ideal_generators(tower: Tower, values: Sequence[Fraction]) -> list[str]:
    return [tower.render(tower.generator(a) - tower.constant(v)) for a, v in enumerate(values)]


def goodearl_fiber(obj: HopfTower | Tower, i: int, m: Sequence[Any]) -> FiberResult:
    """Characters of ``H_(i)`` restricting to ``m`` on ``H_(i-1)``.

    ``m`` gives one value per generator before ``x_i``.
    """
    tower = _tower_of(obj)
    k = tower.check_step(i, lowest=2)
    base = tuple(to_scalar(v) for v in m)
    if len(base) != k:
        raise CharacterError(f"step {i} needs values for {k} generators, got {len(base)}")
    padded = _padded(tower, base)
    bad = [(j, a, v) for j, a, v in character_residuals(tower, padded, upto=k) if v]
    if bad:
        j, a, v = bad[0]
        raise CharacterError(
            f"not a character: the {tower.names[j]}*{tower.names[a]} relation evaluates to {v}"
        )

    step = tower.steps[k]
    name = tower.names[k]
    ideal = ", ".join(_ideal_generators(tower, base))
    prefix = f"{ideal}, " if ideal else ""
    diagnostics: list[str] = []
    sigma_fixed = all(step.sigma[a].evaluate(padded) == base[a] for a in range(k))
    delta_zero = all(not step.delta[a].evaluate(padded) for a in range(k))

    if sigma_fixed and delta_zero:
        return FiberResult(
            FiberKind.LINE, i, base,
            description=f"{{<{prefix}{name} - lambda> : lambda in Q}}",
            diagnostics=["m is (sigma, delta)-invariant"],
        )
    if sigma_fixed:
        return FiberResult(
            FiberKind.EMPTY, i, base,
            description="no character extends m",
            diagnostics=["m is sigma-invariant but m o delta is nonzero"],
        )

    holds, detail = _commutator_condition(tower, i, padded)
    diagnostics.append(detail)
    a = next(a for a in range(k) if step.sigma[a].evaluate(padded) != base[a])
    # r = (x_a - m(x_a)) / (m(sigma(x_a)) - m(x_a)) has m(r) = 0 and m(sigma(r)) = 1
    scale = 1 / (step.sigma[a].evaluate(padded) - base[a])
    r = (tower.generator(a) - tower.constant(base[a])).scale(scale)
    shift = tower.apply_skew_derivation(i, r).evaluate(padded)
    diagnostics.append(f"r = {tower.render(r)}, lambda0 = m(delta(r)) = {shift}")
    extension = base + (-shift,)
    valid = not any(v for _, _, v in character_residuals(tower, _padded(tower, extension), upto=k + 1))

    if valid:
        return FiberResult(
            FiberKind.POINT, i, base, shift=shift, extension=extension,
            description=f"<{prefix}{tower.render(tower.generator(k) + tower.constant(shift))}>",
            diagnostics=diagnostics,
        )
    if not holds:
        diagnostics.append(f"{name} -> {-shift} does not extend m, and every character over m would")
        return FiberResult(FiberKind.EMPTY, i, base, description="no character extends m", diagnostics=diagnostics)
    diagnostics.append(f"{name} -> {-shift} does not extend m to a character")
    log.warning("fiber over %s at step %d unresolved", base, i)
    return FiberResult(FiberKind.UNRESOLVED, i, base, shift=shift, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# Normality
# ---------------------------------------------------------------------------

class NormalityVerdict(str, Enum):
    NORMAL = "Normal-up-to-degree"
    NOT_NORMAL = "NotNormal"


@dataclass
class NormalityResult:
    verdict: NormalityVerdict
    max_deg: int
    generators: tuple[str, ...]
    witness: str | None = None
    witness_element: NcPoly | None = None
    failed_test: str | None = None
    tests_run: int = 0
    hopf_ideal: bool = False
    hopf_ideal_detail: str = ""


def _check_rewrite_stable(tower: Tower, listed: set[int]) -> None:
    def inside(mono) -> bool:
        return any(mono[a] for a in listed)

    for j in range(1, tower.arity):
        step = tower.steps[j]
        for i in range(j):
            if i not in listed and j not in listed:
                continue
            sigma_ok = j in listed or all(inside(m) for m in step.sigma[i].terms)
            delta_ok = all(inside(m) for m in step.delta[i].terms)
            if not (sigma_ok and delta_ok):
                raise NormalityError(
                    f"generating set is not rewrite-stable: rewriting {tower.names[j]}*{tower.names[i]} "
                    f"leaves the ideal"
                )


def normality_search(ht: HopfTower, generators: Sequence[str], max_deg: int) -> NormalityResult:
    """Bounded test of whether the ideal generated by ``generators`` is a normal Hopf ideal.

    Runs both adjoint actions on the ideal generators and both adjoint
    coactions on the normal monomials of the ideal, up to ``max_deg``.
    """
    tower = ht.tower
    if max_deg < 0:
        raise NormalityError(f"degree bound must be non-negative, got {max_deg}")
    if not generators:
        raise NormalityError("at least one ideal generator is required")
    listed = {tower.index(g) for g in generators}
    _check_rewrite_stable(tower, listed)
    names = tuple(generators)

    def in_ideal(p: NcPoly) -> bool:
        return all(any(mono[a] for a in listed) for mono in p.terms)

    def slot_in_ideal(t: Tensor2, slot: int) -> bool:
        return all(any(key[slot][a] for a in listed) for key in t.terms)

    one = tower.one()
    hs = [one] + [NcPoly.monomial(m) for m in monomials_up_to(ht.arity, max_deg)]
    members = [NcPoly.monomial(m) for m in monomials_up_to(ht.arity, max_deg) if any(m[a] for a in listed)]
    tests = 0

    def fail(test: str, element: NcPoly, label: str, rendered: str) -> NormalityResult:
        log.info("ideal <%s> of %s is not normal: %s", ",".join(names), ht.name, label)
        return NormalityResult(
            NormalityVerdict.NOT_NORMAL, max_deg, names,
            witness=f"{label} = {rendered}", witness_element=element,
            failed_test=test, tests_run=tests, **_hopf_ideal(ht, listed, in_ideal, slot_in_ideal),
        )

    actions: list[tuple[str, Callable[[NcPoly, NcPoly], NcPoly]]] = [
        ("ad_left", lambda h, a: _adjoint(ht, h, a, left=True)),
        ("ad_right", lambda h, a: _adjoint(ht, h, a, left=False)),
    ]
    for test, action in actions:
        for h in hs:
            for g in sorted(listed):
                a = tower.generator(g)
                value = action(h, a)
                tests += 1
                if not in_ideal(value):
                    return fail(test, h, f"{test}({ht.render(h)})({ht.names[g]})", ht.render(value))

    for u in members:
        left, right = _coactions(ht, u)
        tests += 2
        if not slot_in_ideal(left, 1):
            return fail("coaction_left", u, f"coaction_left({ht.render(u)})", ht.render(left))
        if not slot_in_ideal(right, 0):
            return fail("coaction_right", u, f"coaction_right({ht.render(u)})", ht.render(right))

    log.info("ideal <%s> of %s is normal up to degree %d (%d tests)", ",".join(names), ht.name, max_deg, tests)
    return NormalityResult(
        NormalityVerdict.NORMAL, max_deg, names, tests_run=tests,
        **_hopf_ideal(ht, listed, in_ideal, slot_in_ideal),
    )


def _adjoint(ht: HopfTower, h: NcPoly, a: NcPoly, *, left: bool) -> NcPoly:
    """``h1 a S(h2)`` when ``left``, else ``S(h1) a h2``."""
    tower = ht.tower
    total = tower.zero()
    for (m1, m2), c in ht.coproduct(h).terms.items():
        p1, p2 = NcPoly.monomial(m1), NcPoly.monomial(m2)
        if left:
            term = tower.product([p1, a, ht.antipode(p2)])
        else:
            term = tower.product([ht.antipode(p1), a, p2])
        total = total + term.scale(c)
    return total


def _coactions(ht: HopfTower, u: NcPoly) -> tuple[Tensor2, Tensor2]:
    """``u1 S(u3) (x) u2`` and ``u2 (x) S(u1) u3``."""
    tower = ht.tower
    n = ht.arity
    left = Tensor2.zero(n)
    right = Tensor2.zero(n)
    for (m1, m2, m3), c in embed_12(ht.coproduct, ht.coproduct(u)).terms.items():
        p1, p2, p3 = NcPoly.monomial(m1), NcPoly.monomial(m2), NcPoly.monomial(m3)
        left = left + Tensor2.outer(tower.mul(p1, ht.antipode(p3)), p2).scale(c)
        right = right + Tensor2.outer(p2, tower.mul(ht.antipode(p1), p3)).scale(c)
    return left, right


def _hopf_ideal(ht: HopfTower, listed: set[int], in_ideal, slot_in_ideal) -> dict[str, Any]:
    tower = ht.tower
    for g in sorted(listed):
        a = tower.generator(g)
        name = ht.names[g]
        if ht.counit(a):
            return {"hopf_ideal": False, "hopf_ideal_detail": f"eps({name}) = {ht.counit(a)}"}
        if not in_ideal(ht.antipode(a)):
            return {"hopf_ideal": False, "hopf_ideal_detail": f"S({name}) = {ht.render(ht.antipode(a))}"}
        delta = ht.coproduct(a)
        outside = [
            (key, c) for key, c in delta.terms.items()
            if not any(key[0][b] for b in listed) and not any(key[1][b] for b in listed)
        ]
        if outside:
            stray = Tensor2._wrap(ht.arity, dict(outside))
            return {"hopf_ideal": False, "hopf_ideal_detail": f"Delta({name}) has {ht.render(stray)} outside I(x)H + H(x)I"}
    return {"hopf_ideal": True, "hopf_ideal_detail": "Delta(I) in I(x)H + H(x)I, eps(I) = 0, S(I) in I on generators"}
