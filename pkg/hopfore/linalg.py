"""Exact linear algebra and the substitution solver over the rationals.

Everything is done with sympy ``Rational`` matrices and expressions; results
are handed back to the rest of the package as ``Fraction`` values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping, Sequence

import sympy

from .ore_core import NcPoly

log = logging.getLogger(__name__)


def to_rational(value: Fraction | int) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def to_fraction(value: Any) -> Fraction:
    value = sympy.nsimplify(value) if not isinstance(value, sympy.Rational) else value
    if not isinstance(value, sympy.Rational):
        raise ValueError(f"{value} is not rational")
    return Fraction(int(value.p), int(value.q))


def evaluate_symbolic(p: NcPoly, values: Sequence[Any]) -> sympy.Expr:
    """Image of ``p`` under the character with (possibly symbolic) generator values."""
    total = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = to_rational(c)
        for a, e in enumerate(mono):
            if e:
                term = term * values[a] ** e
        total += term
    return sympy.expand(total)


# ---------------------------------------------------------------------------
# Nullspaces
# ---------------------------------------------------------------------------

def nullspace(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """Reduced basis of ``{v : row . v = 0 for every row}``.

    ``rows`` are sparse, column index to coefficient. The basis vectors are the
    rows of the reduced row echelon form of any nullspace basis, so the answer
    does not depend on how sympy chose it.
    """
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(r == c)) for c in range(ncols)] for r in range(ncols)]
    matrix = sympy.zeros(len(rows), ncols)
    for r, row in enumerate(rows):
        for c, value in row.items():
            matrix[r, c] = to_rational(value)
    basis = matrix.nullspace()
    if not basis:
        return []
    reduced, pivots = sympy.Matrix.hstack(*basis).T.rref()
    log.debug("nullspace: %d equations, %d unknowns, dimension %d", len(rows), ncols, len(pivots))
    return [
        [to_fraction(reduced[r, c]) for c in range(ncols)]
        for r in range(len(pivots))
    ]


# ---------------------------------------------------------------------------
# Substitution solver
# ---------------------------------------------------------------------------

class ConstraintKind(str, Enum):
    FREE = "free"
    FIXED = "fixed"
    DEPENDENT = "dependent"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Constraint:
    kind: ConstraintKind
    value: Fraction | None = None
    expression: Any = None

    def describe(self, names: Mapping[sympy.Symbol, str] | None = None) -> str:
        if self.kind is ConstraintKind.FIXED:
            return str(self.value)
        if self.kind is ConstraintKind.DEPENDENT:
            expr = self.expression
            if names:
                expr = expr.subs({s: sympy.Symbol(n) for s, n in names.items()})
            return str(expr)
        return self.kind.value


@dataclass
class TriangularSolution:
    unknowns: tuple[sympy.Symbol, ...]
    constraints: dict[sympy.Symbol, Constraint]
    residual: list[sympy.Expr] = field(default_factory=list)
    inconsistent: bool = False
    trace: list[str] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return not self.inconsistent and not any(
            c.kind is ConstraintKind.UNRESOLVED for c in self.constraints.values()
        )

    def point(self, free_value: Fraction = Fraction(0)) -> list[Fraction]:
        """One solution: free unknowns set to ``free_value``, dependents evaluated."""
        if not self.resolved:
            raise ValueError("system is not fully resolved")
        free = {
            s: to_rational(free_value)
            for s, c in self.constraints.items()
            if c.kind is ConstraintKind.FREE
        }
        out = []
        for s in self.unknowns:
            c = self.constraints[s]
            if c.kind is ConstraintKind.FIXED:
                out.append(c.value)
            elif c.kind is ConstraintKind.FREE:
                out.append(free_value)
            else:
                out.append(to_fraction(c.expression.subs(free)))
        return out


def _single_root(eq: sympy.Expr, symbol: sympy.Symbol) -> sympy.Expr | None:
    """The value of ``symbol`` if ``eq = 0`` pins it to one rational number."""
    poly = sympy.Poly(eq, symbol)
    if poly.degree() == 1:
        return -poly.coeff_monomial(1) / poly.coeff_monomial(symbol)
    square_free = poly.sqf_part()
    if square_free.degree() == 1:
        return -square_free.coeff_monomial(1) / square_free.coeff_monomial(symbol)
    return None


def _is_linear(eq: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> bool:
    if not symbols:
        return True
    return sympy.Poly(eq, *symbols).total_degree() <= 1


def solve_triangular(equations: Sequence[Any], unknowns: Sequence[sympy.Symbol]) -> TriangularSolution:
    """Resolve a polynomial system by repeated single-unknown substitution.

    Any equation left with a single unknown whose zero set is one rational
    value fixes that unknown. When no such equation remains, a linear residue
    goes to ``sympy.linsolve``; anything else is reported as unresolved.
    """
    unknowns = tuple(unknowns)
    assigned: dict[sympy.Symbol, sympy.Expr] = {}
    trace: list[str] = []
    pending = [sympy.expand(e) for e in equations]
    solution = TriangularSolution(unknowns=unknowns, constraints={}, trace=trace)

    while True:
        pending = [sympy.expand(e.subs(assigned)) for e in pending]
        pending = [e for e in pending if e != 0]
        if any(e.is_number for e in pending):
            bad = next(e for e in pending if e.is_number)
            trace.append(f"contradiction {bad} = 0")
            solution.inconsistent = True
            solution.residual = pending
            for s in unknowns:
                solution.constraints[s] = Constraint(ConstraintKind.UNRESOLVED)
            log.debug("substitution solver: inconsistent system")
            return solution
        picked = None
        for eq in pending:
            symbols = eq.free_symbols & set(unknowns)
            if len(symbols) != 1:
                continue
            (symbol,) = symbols
            value = _single_root(eq, symbol)
            if value is not None:
                picked = (symbol, value)
                break
        if picked is None:
            break
        symbol, value = picked
        assigned[symbol] = value
        trace.append(f"{symbol} = {value}")
        log.debug("substitution solver: %s = %s", symbol, value)

    for s, v in assigned.items():
        solution.constraints[s] = Constraint(ConstraintKind.FIXED, value=to_fraction(v))

    remaining = [s for s in unknowns if s not in assigned]
    involved = [s for s in remaining if any(s in e.free_symbols for e in pending)]
    if pending and all(_is_linear(e, involved) for e in pending):
        answers = sympy.linsolve(pending, involved)
        if answers == sympy.EmptySet:
            trace.append("linear residue has no solution")
            solution.inconsistent = True
            solution.residual = pending
            for s in unknowns:
                solution.constraints[s] = Constraint(ConstraintKind.UNRESOLVED)
            return solution
        (answer,) = tuple(answers)
        for s, expr in zip(involved, answer):
            expr = sympy.expand(expr)
            if expr == s:
                solution.constraints[s] = Constraint(ConstraintKind.FREE)
            elif not expr.free_symbols:
                solution.constraints[s] = Constraint(ConstraintKind.FIXED, value=to_fraction(expr))
            else:
                solution.constraints[s] = Constraint(ConstraintKind.DEPENDENT, expression=expr)
            trace.append(f"{s} = {expr} (linear)")
        pending = []
    elif pending:
        for s in involved:
            solution.constraints[s] = Constraint(ConstraintKind.UNRESOLVED)
        log.warning("substitution solver left %d nonlinear equations in %s", len(pending), involved)

    for s in remaining:
        solution.constraints.setdefault(s, Constraint(ConstraintKind.FREE))
    solution.residual = pending
    return solution
