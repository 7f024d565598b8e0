from fractions import Fraction

import sympy

from hopfore.linalg import ConstraintKind, nullspace, solve_triangular, to_fraction


def test_nullspace_is_reduced():
    # x + y - z = 0
    basis = nullspace([{0: 1, 1: 1, 2: -1}], 3)
    assert basis == [[1, 0, 1], [0, 1, 1]]


def test_nullspace_without_equations():
    assert nullspace([], 2) == [[1, 0], [0, 1]]
    assert nullspace([{0: 1}], 1) == []


def test_to_fraction():
    assert to_fraction(sympy.Rational(-3, 4)) == Fraction(-3, 4)


def test_substitution_fixes_values_in_turn():
    x, y = sympy.symbols("x y")
    solution = solve_triangular([x * y + x - 2, y - 1], (x, y))
    assert solution.resolved
    assert solution.point() == [1, 1]
    assert solution.trace[:2] == ["y = 1", "x = 1"]


def test_repeated_root_is_fixed():
    x = sympy.Symbol("x")
    solution = solve_triangular([(x - 2) ** 2], (x,))
    assert solution.constraints[x].value == 2


def test_linear_residue_leaves_a_dependent_unknown():
    x, y = sympy.symbols("x y")
    solution = solve_triangular([x - y], (x, y))
    assert solution.resolved
    kinds = {s: c.kind for s, c in solution.constraints.items()}
    assert sorted(kinds.values()) == sorted([ConstraintKind.FREE, ConstraintKind.DEPENDENT])
    assert solution.point(Fraction(5)) == [5, 5]


def test_contradiction_is_inconsistent():
    x = sympy.Symbol("x")
    solution = solve_triangular([x - 1, x - 2], (x,))
    assert solution.inconsistent
    assert not solution.resolved


def test_irrational_root_is_unresolved():
    x, y = sympy.symbols("x y")
    solution = solve_triangular([x**2 - 2], (x, y))
    assert solution.constraints[x].kind is ConstraintKind.UNRESOLVED
    assert solution.constraints[y].kind is ConstraintKind.FREE
    assert not solution.resolved
