"""Reading and writing ``.hopf`` presentations.

A presentation lists generators in tower order. Each later generator may
carry the images of the earlier ones under sigma, sigma^-1 and delta, its
coproduct tail ``w`` and its counit value::

    algebra "B"
    param lambda
    gen Y
    gen X { delta: Y -> Y }
    gen Z {
      sigma: X -> X - 1
      sigma_inv: X -> X + 1
      delta: X -> lambda*Y
      w: X ox Y - Y ox X
    }

Parsing is structural: images are normalized and checked for well-foundedness,
but the tower and Hopf identities are left to the checkers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

import lark
from lark import Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .errors import PresentationError
from .hopf import HopfTower
from .ore_core import (
    DEFAULT_REWRITE_BUDGET,
    Const,
    Expr,
    Gen,
    NcPoly,
    Neg,
    Power,
    Product,
    Step,
    Sum,
    Tower,
    to_scalar,
)
from .tensor import Tensor2

log = logging.getLogger(__name__)

KEYWORDS = ("algebra", "param", "gen", "sigma", "sigma_inv", "delta", "w", "epsilon", "ox")

GRAMMAR = r"""
start: item*

?item: algebra_decl
     | param_decl
     | gen_decl

algebra_decl: "algebra" ESCAPED_STRING
param_decl: "param" NAME ("=" sum)?
gen_decl: "gen" NAME ("{" clause* "}")?

?clause: sigma_clause
       | sigma_inv_clause
       | delta_clause
       | w_clause
       | epsilon_clause

sigma_clause: "sigma" ":" entries
sigma_inv_clause: "sigma_inv" ":" entries
delta_clause: "delta" ":" entries
w_clause: "w" ":" tensor
epsilon_clause: "epsilon" ":" sum

entries: entry (";" entry)* ";"?
entry: NAME "->" sum

tensor: tterm tmore*
?tmore: "+" tterm -> tplus
      | "-" tterm -> tminus
tterm: product "ox" product

?sum: product
    | sum "+" product -> add
    | sum "-" product -> sub

?product: unary
        | product "*" unary -> mul

?unary: power
      | "-" unary -> neg

?power: atom
      | atom "^" INT -> pow

?atom: RATIONAL -> number
     | INT -> number
     | NAME -> name
     | "(" sum ")"

RATIONAL.2: /[0-9]+\/[0-9]+/
NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.INT
%import common.ESCAPED_STRING
%import common.WS
COMMENT: /#[^\n]*/
%ignore WS
%ignore COMMENT
"""

# the basic lexer retypes a NAME spelling a keyword in every context, so keywords are reserved
_PARSER = lark.Lark(GRAMMAR, parser="lalr", lexer="basic", start=["start", "sum"], propagate_positions=True)


def _syntax_error(text: str, exc: UnexpectedInput) -> PresentationError:
    line, column = exc.line, exc.column
    if line is None or line < 1:
        lines = text.split("\n")
        line, column = len(lines), len(lines[-1]) + 1
    if isinstance(exc, UnexpectedCharacters):
        message = f"unexpected character {exc.char!r}"
    elif isinstance(exc, UnexpectedEOF):
        message = "unexpected end of input"
    elif isinstance(exc, UnexpectedToken):
        message = "unexpected end of input" if exc.token.type == "$END" else f"unexpected {exc.token!s}"
    else:
        message = str(exc).splitlines()[0]
    return PresentationError("syntax", message, line, column)


def _at(token: Token | Tree) -> dict[str, int | None]:
    if isinstance(token, Token):
        return {"line": token.line, "column": token.column}
    meta = token.meta
    return {"line": getattr(meta, "line", None), "column": getattr(meta, "column", None)}


@dataclass
class _Scope:
    """Names visible to an expression: parameters and generators before ``limit``."""

    params: dict[str, Fraction | None]
    generators: dict[str, int]
    limit: int
    constant_only: bool = False


class _Elaborator:
    def __init__(self, text: str, params: Mapping[str, Any] | None, rewrite_budget: int) -> None:
        self.text = text
        self.bindings = {name: self._bound(name, value) for name, value in (params or {}).items()}
        self.rewrite_budget = rewrite_budget
        self.name = "algebra"
        self.params: dict[str, Fraction | None] = {}
        self.gen_tokens: list[Token] = []
        self.generators: dict[str, int] = {}

    @staticmethod
    def _bound(name: str, value: Any) -> Fraction:
        try:
            return to_scalar(value)
        except (ValueError, TypeError, ZeroDivisionError):
            raise PresentationError("malformed-rational", f"value {value!r} for {name} is not a rational") from None

    # -- expressions ----------------------------------------------------------

    def expression(self, tree: Tree | Token, scope: _Scope) -> Expr:
        if isinstance(tree, Token):
            raise PresentationError("syntax", f"unexpected {tree!s}", **_at(tree))
        kind = tree.data
        if kind == "number":
            return Const(self.number(tree.children[0]))
        if kind == "name":
            return self.lookup(tree.children[0], scope)
        if kind in ("add", "sub"):
            left = self.expression(tree.children[0], scope)
            right = self.expression(tree.children[1], scope)
            return Sum((left, right if kind == "add" else Neg(right)))
        if kind == "mul":
            return Product((self.expression(tree.children[0], scope), self.expression(tree.children[1], scope)))
        if kind == "neg":
            return Neg(self.expression(tree.children[0], scope))
        if kind == "pow":
            return Power(self.expression(tree.children[0], scope), int(tree.children[1]))
        raise PresentationError("syntax", f"unexpected {kind}", **_at(tree))

    def number(self, token: Token) -> Fraction:
        text = str(token)
        numerator, _, denominator = text.partition("/")
        if denominator and int(denominator) == 0:
            raise PresentationError("malformed-rational", f"zero denominator in {text}", **_at(token))
        return Fraction(int(numerator), int(denominator or 1))

    def lookup(self, token: Token, scope: _Scope) -> Expr:
        name = str(token)
        if name in scope.params:
            value = scope.params[name]
            if value is None:
                raise PresentationError("unbound-parameter", f"parameter {name} has no value", **_at(token))
            return Const(value)
        if name in scope.generators:
            if scope.constant_only:
                raise PresentationError("not-constant", f"{name} is a generator; a constant is required here", **_at(token))
            if scope.generators[name] >= scope.limit:
                raise PresentationError(
                    "forward-reference", f"{name} is not defined before this generator", **_at(token)
                )
            return Gen(name)
        raise PresentationError("unknown-identifier", f"unknown identifier {name}", **_at(token))

    def constant(self, tree: Tree, scope: _Scope) -> Fraction:
        expr = self.expression(tree, _Scope(scope.params, scope.generators, scope.limit, constant_only=True))
        return Tower((), ()).normal_form(expr).constant_term()

    # -- declarations ---------------------------------------------------------

    def run(self, tree: Tree) -> HopfTower:
        items = tree.children
        seen_algebra = False
        # generator names first, so a later name can be reported as a forward reference
        for item in items:
            if item.data == "gen_decl":
                token = item.children[0]
                name = str(token)
                if name in self.generators:
                    raise PresentationError("duplicate", f"generator {name} declared twice", **_at(token))
                self.generators[name] = len(self.gen_tokens)
                self.gen_tokens.append(token)

        names = tuple(str(t) for t in self.gen_tokens)
        n = len(names)
        staged: list[dict[str, Any]] = []
        count = 0
        for item in items:
            if item.data == "algebra_decl":
                if seen_algebra:
                    raise PresentationError("duplicate", "algebra name given twice", **_at(item))
                seen_algebra = True
                self.name = json.loads(str(item.children[0]))
            elif item.data == "param_decl":
                self.declare_param(item)
            else:
                staged.append(self.generator(item, count, names, staged))
                count += 1

        steps = [
            Step(
                sigma=tuple(p.extend(n) for p in s["sigma"]),
                sigma_inv=tuple(p.extend(n) for p in s["sigma_inv"]),
                delta=tuple(p.extend(n) for p in s["delta"]),
            )
            for s in staged
        ]
        tails = [s["w"].extend(n) for s in staged]
        values = [s["epsilon"] for s in staged]
        tower = Tower(names, steps, rewrite_budget=self.rewrite_budget)
        return HopfTower(tower, tails, values, name=self.name)

    def declare_param(self, item: Tree) -> None:
        token = item.children[0]
        name = str(token)
        if name in self.params or name in self.generators:
            raise PresentationError("duplicate", f"{name} declared twice", **_at(token))
        value: Fraction | None = None
        if len(item.children) > 1 and item.children[1] is not None:
            scope = _Scope(self.params, self.generators, 0)
            value = self.constant(item.children[1], scope)
        if name in self.bindings:
            value = self.bindings[name]
        self.params[name] = value

    def _prefix_tower(self, names: tuple[str, ...], staged: list[dict[str, Any]]) -> Tower:
        k = len(staged)
        steps = [
            Step(
                sigma=tuple(p.extend(k) for p in s["sigma"]),
                sigma_inv=tuple(p.extend(k) for p in s["sigma_inv"]),
                delta=tuple(p.extend(k) for p in s["delta"]),
            )
            for s in staged
        ]
        return Tower(names[:k], steps, rewrite_budget=self.rewrite_budget)

    def generator(self, item: Tree, k: int, names: tuple[str, ...], staged: list[dict[str, Any]]) -> dict[str, Any]:
        token = item.children[0]
        prefix = self._prefix_tower(names, staged)
        scope = _Scope(self.params, self.generators, k)
        identity = [NcPoly.generator(k, a) for a in range(k)]
        data: dict[str, Any] = {
            "sigma": list(identity),
            "sigma_inv": list(identity),
            "delta": [NcPoly.zero(k) for _ in range(k)],
            "w": Tensor2.zero(k),
            "epsilon": Fraction(0),
        }
        seen: set[str] = set()
        for clause in item.children[1:]:
            if clause is None:
                continue
            kind = clause.data.replace("_clause", "")
            if kind in seen:
                raise PresentationError("duplicate", f"second {kind} clause for {token}", **_at(clause))
            seen.add(kind)
            body = clause.children[0]
            if kind in ("sigma", "sigma_inv", "delta"):
                self.entries(body, data[kind], scope, prefix, names)
            elif kind == "w":
                data["w"] = self.tensor(body, scope, prefix)
            else:
                data["epsilon"] = self.constant(body, scope)
        moved = any(p != g for p, g in zip(data["sigma"], identity))
        if moved and "sigma_inv" not in seen:
            raise PresentationError("missing-inverse", f"sigma of {token} needs a sigma_inv clause", **_at(token))
        return data

    def entries(self, body: Tree, target: list[NcPoly], scope: _Scope, prefix: Tower, names: tuple[str, ...]) -> None:
        assigned: set[str] = set()
        for entry in body.children:
            token, expr_tree = entry.children
            name = str(token)
            if name not in self.generators:
                raise PresentationError("unknown-identifier", f"unknown generator {name}", **_at(token))
            position = self.generators[name]
            if position >= scope.limit:
                raise PresentationError(
                    "forward-reference", f"{name} is not defined before {names[scope.limit]}", **_at(token)
                )
            if name in assigned:
                raise PresentationError("duplicate", f"{name} assigned twice", **_at(token))
            assigned.add(name)
            target[position] = prefix.normal_form(self.expression(expr_tree, scope))

    def tensor(self, body: Tree, scope: _Scope, prefix: Tower) -> Tensor2:
        total = Tensor2.zero(prefix.arity)
        for child in body.children:
            sign = 1
            term = child
            if child.data in ("tplus", "tminus"):
                sign = -1 if child.data == "tminus" else 1
                term = child.children[0]
            left = prefix.normal_form(self.expression(term.children[0], scope))
            right = prefix.normal_form(self.expression(term.children[1], scope))
            total = total + Tensor2.outer(left, right).scale(sign)
        return total


def parse(
    text: str,
    params: Mapping[str, Any] | None = None,
    *,
    rewrite_budget: int = DEFAULT_REWRITE_BUDGET,
) -> HopfTower:
    """Elaborate presentation text into a ``HopfTower``.

    ``params`` binds declared parameters, overriding any value given in the text.
    A generator's ``sigma`` and ``sigma_inv`` clauses default to the identity when
    omitted, but ``sigma_inv`` is required exactly when ``sigma`` moves some
    earlier generator (``missing-inverse`` otherwise).
    """
    try:
        tree = _PARSER.parse(text, start="start")
    except UnexpectedInput as exc:
        raise _syntax_error(text, exc) from None
    elaborator = _Elaborator(text, params, rewrite_budget)
    ht = elaborator.run(tree)
    unused = sorted(set(elaborator.bindings) - set(elaborator.params))
    if unused:
        raise PresentationError("unknown-identifier", f"no parameter named {', '.join(unused)}")
    log.info("parsed %s: %d generators", ht.name, ht.arity)
    return ht


def parse_expression(text: str, ht: HopfTower | Tower) -> NcPoly:
    """Normal form of one expression over all generators of a tower."""
    tower = ht.tower if isinstance(ht, HopfTower) else ht
    try:
        tree = _PARSER.parse(text, start="sum")
    except UnexpectedInput as exc:
        raise _syntax_error(text, exc) from None
    elaborator = _Elaborator(text, None, tower.rewrite_budget)
    elaborator.generators = {name: k for k, name in enumerate(tower.names)}
    scope = _Scope({}, elaborator.generators, tower.arity)
    return tower.normal_form(elaborator.expression(tree, scope))


def serialize(ht: HopfTower) -> str:
    """Canonical text for a tower; deterministic, and ``parse`` reads it back unchanged."""
    tower = ht.tower
    names = ht.names
    lines = [f"algebra {json.dumps(ht.name)}"]
    for k, name in enumerate(names):
        step = tower.steps[k]
        identity = [tower.generator(a) for a in range(k)]
        clauses: list[str] = []
        if step.sigma != tuple(identity) or step.sigma_inv != tuple(identity):
            clauses.append("sigma: " + "; ".join(f"{names[a]} -> {ht.render(p)}" for a, p in enumerate(step.sigma)))
            clauses.append("sigma_inv: " + "; ".join(f"{names[a]} -> {ht.render(p)}" for a, p in enumerate(step.sigma_inv)))
        deltas = [f"{names[a]} -> {ht.render(p)}" for a, p in enumerate(step.delta) if not p.is_zero()]
        if deltas:
            clauses.append("delta: " + "; ".join(deltas))
        if not ht.tails[k].is_zero():
            clauses.append(f"w: {ht.render(ht.tails[k])}")
        if ht.counit_values[k]:
            clauses.append(f"epsilon: {ht.counit_values[k]}")
        if clauses:
            lines.append(f"gen {name} {{")
            lines.extend(f"  {c}" for c in clauses)
            lines.append("}")
        else:
            lines.append(f"gen {name}")
    return "\n".join(lines) + "\n"
