"""Normal-form engine for iterated Ore extensions over the rationals.

An element of a tower k[x1][x2; s2, d2]...[xn; sn, dn] is stored as a PBW
polynomial: a map from exponent vectors ``(e1, ..., en)``, meaning
``x1^e1 * x2^e2 * ... * xn^en``, to exact ``Fraction`` coefficients.

Products are normalized with the rewrite rule

    x_j * x_i  ->  sigma_j(x_i) * x_j + delta_j(x_i)      (j > i)

which terminates because every image only mentions generators below ``x_j``.
Generators are numbered from 0 internally; every public step argument is
1-based (step ``i`` is generator ``x_i``).
"""

from __future__ import annotations

import logging
import threading
from contextlib import contextmanager
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, Iterator, Mapping, Sequence, TypeVar, Union

from .errors import (
    ArityError,
    RewriteBudgetExceeded,
    StepRangeError,
    SupportError,
    UnknownGeneratorError,
)
from .report import CheckResult, ValidationReport

log = logging.getLogger(__name__)

DEFAULT_REWRITE_BUDGET = 10**6
DEFAULT_CACHE_SIZE = 1 << 16

Scalar = Fraction
Monomial = tuple[int, ...]


def to_scalar(value: Any) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to an exact scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact scalar")


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

def monomial_key(mono: Monomial) -> tuple[int, Monomial]:
    """Degree-lexicographic sort key."""
    return (sum(mono), mono)


def highest_generator(mono: Monomial) -> int:
    """Position of the right-most generator present, ``-1`` for the empty monomial."""
    for k in range(len(mono) - 1, -1, -1):
        if mono[k]:
            return k
    return -1


def lowest_generator(mono: Monomial) -> int:
    """Position of the left-most generator present, ``len(mono)`` for the empty monomial."""
    for k, e in enumerate(mono):
        if e:
            return k
    return len(mono)


def _bump(mono: Monomial, k: int, by: int = 1) -> Monomial:
    exps = list(mono)
    exps[k] += by
    return tuple(exps)


def _accumulate(acc: dict, key: Any, coeff: Fraction) -> None:
    acc[key] = acc.get(key, 0) + coeff


def _prune(acc: dict) -> dict:
    for key in [k for k, c in acc.items() if not c]:
        del acc[key]
    return acc


def render_monomial(mono: Monomial, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, mono):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def render_terms(items: Sequence[tuple[Fraction, str, bool]]) -> str:
    """Join ``(coefficient, body, body_is_unit)`` triples into ``a - 2*b + 3``."""
    if not items:
        return "0"
    parts: list[str] = []
    for coeff, body, unit in items:
        magnitude = abs(coeff)
        if unit:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        if not parts:
            parts.append(f"-{text}" if coeff < 0 else text)
        else:
            parts.append(f" - {text}" if coeff < 0 else f" + {text}")
    return "".join(parts)


def default_names(arity: int) -> tuple[str, ...]:
    return tuple(f"x{k + 1}" for k in range(arity))


# ---------------------------------------------------------------------------
# NcPoly
# ---------------------------------------------------------------------------

class NcPoly:
    """An immutable PBW polynomial. Zero coefficients are never stored."""

    __slots__ = ("arity", "_terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], Any] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != arity:
                raise ArityError(f"monomial {mono} does not have arity {arity}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = to_scalar(coeff)
            if c:
                clean[mono] = c
        self.arity = arity
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, arity: int, terms: dict[Monomial, Fraction]) -> "NcPoly":
        poly = cls.__new__(cls)
        poly.arity = arity
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, arity: int) -> "NcPoly":
        return cls._wrap(arity, {})

    @classmethod
    def constant(cls, arity: int, value: Any) -> "NcPoly":
        c = to_scalar(value)
        return cls._wrap(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def one(cls, arity: int) -> "NcPoly":
        return cls.constant(arity, 1)

    @classmethod
    def generator(cls, arity: int, position: int) -> "NcPoly":
        if not 0 <= position < arity:
            raise UnknownGeneratorError(f"no generator at position {position} in arity {arity}")
        return cls._wrap(arity, {_bump((0,) * arity, position): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Sequence[int], coeff: Any = 1) -> "NcPoly":
        return cls(len(mono), {tuple(mono): coeff})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending degree-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: monomial_key(kv[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.arity, Fraction(0))

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def degree(self) -> int:
        """Total degree; ``-1`` for zero."""
        return max((sum(m) for m in self._terms), default=-1)

    def support(self) -> int:
        """Highest generator position used; ``-1`` for constants."""
        return max((highest_generator(m) for m in self._terms), default=-1)

    def _check_arity(self, other: "NcPoly") -> None:
        if not isinstance(other, NcPoly):
            raise TypeError(f"expected NcPoly, got {type(other).__name__}")
        if other.arity != self.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "NcPoly") -> "NcPoly":
        self._check_arity(other)
        acc = dict(self._terms)
        for mono, c in other._terms.items():
            _accumulate(acc, mono, c)
        return NcPoly._wrap(self.arity, _prune(acc))

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def __neg__(self) -> "NcPoly":
        return NcPoly._wrap(self.arity, {m: -c for m, c in self._terms.items()})

    def scale(self, value: Any) -> "NcPoly":
        c = to_scalar(value)
        if not c:
            return NcPoly.zero(self.arity)
        return NcPoly._wrap(self.arity, {m: c * v for m, v in self._terms.items()})

    def extend(self, arity: int) -> "NcPoly":
        """The same element inside a tower with more generators appended."""
        if arity < self.arity:
            raise ArityError(f"cannot extend arity {self.arity} to {arity}")
        pad = (0,) * (arity - self.arity)
        return NcPoly._wrap(arity, {m + pad: c for m, c in self._terms.items()})

    def restrict(self, arity: int) -> "NcPoly":
        """The same element inside the subtower on the first ``arity`` generators."""
        if self.support() >= arity:
            raise SupportError(f"element uses generator position {self.support()} outside the first {arity}")
        return NcPoly._wrap(arity, {m[:arity]: c for m, c in self._terms.items()})

    def evaluate(self, values: Sequence[Any]) -> Any:
        """Image under the character sending generator ``a`` to ``values[a]``.

        PBW monomials are ordered products, so any commutative ring of values
        works, including sympy expressions.
        """
        if self.support() >= len(values):
            raise SupportError(f"no value for generator position {self.support()}")
        total: Any = Fraction(0)
        for mono, c in self._terms.items():
            term: Any = c
            for a, e in enumerate(mono):
                if e:
                    term = term * values[a] ** e
            total = total + term
        return total

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.arity)
        return render_terms(
            [(c, render_monomial(m, names), not any(m)) for m, c in self.items()]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.arity == other.arity and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"NcPoly({self.render()})"


def add(p: NcPoly, q: NcPoly) -> NcPoly:
    return p + q


def scale(c: Any, p: NcPoly) -> NcPoly:
    return p.scale(c)


# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------

class Expr:
    """Unnormalized product/sum tree over generator names and scalars."""


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Gen(Expr):
    name: str


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Product(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int


T = TypeVar("T")


def fold_expression(
    expr: Expr,
    const: Callable[[Fraction], T],
    gen: Callable[[str], T],
    add_: Callable[[T, T], T],
    mul_: Callable[[T, T], T],
) -> T:
    """Evaluate ``expr`` in any ring given by its leaf and operation callbacks."""
    if isinstance(expr, Const):
        return const(expr.value)
    if isinstance(expr, Gen):
        return gen(expr.name)
    if isinstance(expr, Sum):
        acc = const(Fraction(0))
        for term in expr.terms:
            acc = add_(acc, fold_expression(term, const, gen, add_, mul_))
        return acc
    if isinstance(expr, Neg):
        return mul_(const(Fraction(-1)), fold_expression(expr.operand, const, gen, add_, mul_))
    if isinstance(expr, Product):
        acc = const(Fraction(1))
        for factor in expr.factors:
            acc = mul_(acc, fold_expression(factor, const, gen, add_, mul_))
        return acc
    if isinstance(expr, Power):
        if expr.exponent < 0:
            raise ValueError("negative powers are not defined in a tower")
        base = fold_expression(expr.base, const, gen, add_, mul_)
        acc = const(Fraction(1))
        for _ in range(expr.exponent):
            acc = mul_(acc, base)
        return acc
    raise TypeError(f"not an expression node: {expr!r}")


def as_expression(p: NcPoly, names: Sequence[str]) -> Expr:
    """An expression tree whose evaluation is ``p``, generators in PBW order."""
    terms: list[Expr] = []
    for mono, c in p.items():
        factors: list[Expr] = [Const(c)]
        for name, e in zip(names, mono):
            factors.extend(Gen(name) for _ in range(e))
        terms.append(Product(tuple(factors)))
    return Sum(tuple(terms))


# ---------------------------------------------------------------------------
# Towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    """Images of the earlier generators under sigma_i, sigma_i^-1 and delta_i."""

    sigma: tuple[NcPoly, ...]
    sigma_inv: tuple[NcPoly, ...]
    delta: tuple[NcPoly, ...]

    @classmethod
    def trivial(cls, position: int, arity: int) -> "Step":
        gens = tuple(NcPoly.generator(arity, a) for a in range(position))
        zeros = tuple(NcPoly.zero(arity) for _ in range(position))
        return cls(sigma=gens, sigma_inv=gens, delta=zeros)

    def is_trivial(self) -> bool:
        return all(
            s == NcPoly.generator(s.arity, a) and s_inv == s and d.is_zero()
            for a, (s, s_inv, d) in enumerate(zip(self.sigma, self.sigma_inv, self.delta))
        )

    def map_images(self, fn: Callable[[NcPoly], NcPoly]) -> "Step":
        return Step(
            sigma=tuple(fn(p) for p in self.sigma),
            sigma_inv=tuple(fn(p) for p in self.sigma_inv),
            delta=tuple(fn(p) for p in self.delta),
        )


class Tower:
    """Presentation of an iterated Ore extension together with its rewrite engine.

    The data is immutable. The engine memoizes products of monomials in
    ``lru_cache`` tables of at most ``cache_size`` entries each, plus one table
    of commuted powers per generator pair; ``clear_caches`` drops them all.
    """

    def __init__(
        self,
        names: Sequence[str],
        steps: Sequence[Step],
        *,
        rewrite_budget: int = DEFAULT_REWRITE_BUDGET,
        cache_size: int = DEFAULT_CACHE_SIZE,
    ) -> None:
        names = tuple(names)
        steps = tuple(steps)
        if len(names) != len(steps):
            raise ArityError(f"{len(names)} generator names but {len(steps)} steps")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if rewrite_budget < 1:
            raise ValueError("rewrite budget must be positive")
        n = len(names)
        for k, step in enumerate(steps):
            for label, images in (("sigma", step.sigma), ("sigma_inv", step.sigma_inv), ("delta", step.delta)):
                if len(images) != k:
                    raise SupportError(f"{label} of {names[k]} needs {k} images, got {len(images)}")
                for a, image in enumerate(images):
                    if image.arity != n:
                        raise ArityError(f"{label}_{names[k]}({names[a]}) has arity {image.arity}, expected {n}")
                    if image.support() >= k:
                        raise SupportError(
                            f"{label}_{names[k]}({names[a]}) mentions {names[image.support()]}, "
                            f"which does not come before {names[k]}"
                        )
        self._names = names
        self._steps = steps
        self._index = {name: k for k, name in enumerate(names)}
        self.rewrite_budget = rewrite_budget
        self.cache_size = cache_size
        self._times_generator = lru_cache(maxsize=cache_size)(self._generator_product)
        self._times_monomial = lru_cache(maxsize=cache_size)(self._monomial_product)
        # (top, k) -> [x_top^e * x_k as {j: c_j} for e = 0, 1, ...]
        self._power_tables: dict[tuple[int, int], list[dict[int, dict[Monomial, Fraction]]]] = {}
        self._power_lock = threading.RLock()
        self._plain_sigma = tuple(
            all(s == NcPoly.generator(n, a) for a, s in enumerate(step.sigma)) for step in steps
        )
        self._zero_delta = tuple(all(d.is_zero() for d in step.delta) for step in steps)
        self._prefixes: dict[int, Tower] = {}
        self._meter = threading.local()

    # -- data ---------------------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self._names)

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def steps(self) -> tuple[Step, ...]:
        return self._steps

    def step(self, i: int) -> Step:
        """Data of 1-based step ``i``."""
        return self._steps[self.check_step(i)]

    def check_step(self, i: int, *, lowest: int = 1) -> int:
        """Validate a 1-based step index and return the generator position."""
        if not lowest <= i <= self.arity:
            raise StepRangeError(f"step {i} is outside {lowest}..{self.arity}")
        return i - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator {name!r}; tower has {', '.join(self._names)}") from None

    def generator(self, which: str | int) -> NcPoly:
        position = self.index(which) if isinstance(which, str) else which
        return NcPoly.generator(self.arity, position)

    def one(self) -> NcPoly:
        return NcPoly.one(self.arity)

    def zero(self) -> NcPoly:
        return NcPoly.zero(self.arity)

    def constant(self, value: Any) -> NcPoly:
        return NcPoly.constant(self.arity, value)

    def render(self, p: NcPoly) -> str:
        return p.render(self._names)

    def prefix(self, k: int) -> "Tower":
        """The subtower on the first ``k`` generators."""
        if not 0 <= k <= self.arity:
            raise StepRangeError(f"prefix length {k} is outside 0..{self.arity}")
        if k == self.arity:
            return self
        cached = self._prefixes.get(k)
        if cached is None:
            cached = Tower(
                self._names[:k],
                [s.map_images(lambda p: p.restrict(k)) for s in self._steps[:k]],
                rewrite_budget=self.rewrite_budget,
                cache_size=self.cache_size,
            )
            self._prefixes[k] = cached
        return cached

    def with_budget(self, rewrite_budget: int) -> "Tower":
        return Tower(self._names, self._steps, rewrite_budget=rewrite_budget, cache_size=self.cache_size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tower):
            return NotImplemented
        return self._names == other._names and self._steps == other._steps

    def __hash__(self) -> int:
        return hash((self._names, self._steps))

    def __repr__(self) -> str:
        return f"Tower({', '.join(self._names)})"

    # -- rewrite engine -------------------------------------------------------

    @contextmanager
    def _metered(self) -> Iterator[None]:
        state = self._meter
        depth = getattr(state, "depth", 0)
        if depth == 0:
            state.steps = 0
        state.depth = depth + 1
        try:
            yield
        finally:
            state.depth = depth

    def _count_rewrite(self) -> None:
        state = self._meter
        state.steps += 1
        if state.steps > self.rewrite_budget:
            raise RewriteBudgetExceeded(
                f"normal form needed more than {self.rewrite_budget} rewrite steps"
            )

    def _generator_product(self, mono: Monomial, k: int) -> dict[Monomial, Fraction]:
        top = highest_generator(mono)
        if top <= k:
            return {_bump(mono, k): Fraction(1)}
        # mono = rest * x_top^e with rest below x_top, and x_top^e * x_k = sum_j c_j * x_top^j
        e = mono[top]
        rest = _bump(mono, top, -e)
        result: dict[Monomial, Fraction] = {}
        for j, coeffs in self._commuted_power(top, k, e).items():
            for m2, c2 in self._times_terms(rest, coeffs).items():
                _accumulate(result, _bump(m2, top, j), c2)
        return _prune(result)

    def _commuted_power(self, top: int, k: int, e: int) -> dict[int, dict[Monomial, Fraction]]:
        """``x_top^e * x_k`` as ``{j: c_j}`` with every ``c_j`` below ``x_top``.

        Built one power at a time from ``x_top * c = sigma(c) * x_top + delta(c)``,
        so the work is a loop over ``e`` and the call depth stays bounded by
        the number of generators.
        """
        with self._power_lock:
            tables = self._power_tables.get((top, k))
            if tables is None:
                tables = [{0: {_bump((0,) * self.arity, k): Fraction(1)}}]
                self._power_tables[(top, k)] = tables
            while len(tables) <= e:
                nxt: dict[int, dict[Monomial, Fraction]] = {}
                for j, coeffs in tables[-1].items():
                    self._count_rewrite()
                    c = NcPoly._wrap(self.arity, coeffs)
                    for shift, image in ((1, self._sigma_image(top, c)), (0, self._delta_image(top, c))):
                        slot = nxt.setdefault(j + shift, {})
                        for m2, c2 in image._terms.items():
                            _accumulate(slot, m2, c2)
                tables.append({j: slot for j, slot in nxt.items() if _prune(slot)})
            return tables[e]

    def _sigma_image(self, k: int, p: NcPoly) -> NcPoly:
        if self._plain_sigma[k]:
            return p
        return self.apply_morphism(self._steps[k].sigma, p)

    def _delta_image(self, k: int, p: NcPoly) -> NcPoly:
        if self._zero_delta[k]:
            return self.zero()
        return self._derive(k, p)

    def _times_terms(self, mono: Monomial, terms: Mapping[Monomial, Fraction]) -> dict[Monomial, Fraction]:
        acc: dict[Monomial, Fraction] = {}
        for m2, c2 in terms.items():
            for m3, c3 in self._times_monomial(mono, m2).items():
                _accumulate(acc, m3, c2 * c3)
        return _prune(acc)

    def _monomial_product(self, left: Monomial, right: Monomial) -> dict[Monomial, Fraction]:
        if highest_generator(left) <= lowest_generator(right):
            return {tuple(a + b for a, b in zip(left, right)): Fraction(1)}
        acc = {left: Fraction(1)}
        for k, e in enumerate(right):
            for _ in range(e):
                nxt: dict[Monomial, Fraction] = {}
                for m, c in acc.items():
                    for m2, c2 in self._times_generator(m, k).items():
                        _accumulate(nxt, m2, c * c2)
                acc = _prune(nxt)
        return acc

    def multiply_monomials(self, left: Monomial, right: Monomial) -> Mapping[Monomial, Fraction]:
        """Normal form of ``left * right`` as a read-only term map."""
        with self._metered():
            return MappingProxyType(self._times_monomial(tuple(left), tuple(right)))

    def mul(self, p: NcPoly, q: NcPoly) -> NcPoly:
        p._check_arity(q)
        if p.arity != self.arity:
            raise ArityError(f"element of arity {p.arity} used in a tower of arity {self.arity}")
        acc: dict[Monomial, Fraction] = {}
        with self._metered():
            for m1, c1 in p._terms.items():
                for m2, c2 in q._terms.items():
                    c12 = c1 * c2
                    for m3, c3 in self._times_monomial(m1, m2).items():
                        _accumulate(acc, m3, c12 * c3)
        return NcPoly._wrap(self.arity, _prune(acc))

    def product(self, factors: Sequence[NcPoly]) -> NcPoly:
        acc = self.one()
        for factor in factors:
            acc = self.mul(acc, factor)
        return acc

    def normal_form(self, expr: Expr | NcPoly) -> NcPoly:
        if isinstance(expr, NcPoly):
            if expr.arity != self.arity:
                raise ArityError(f"element of arity {expr.arity} used in a tower of arity {self.arity}")
            expr = as_expression(expr, self._names)
        n = self.arity
        with self._metered():
            return fold_expression(
                expr,
                const=lambda c: NcPoly.constant(n, c),
                gen=self.generator,
                add_=NcPoly.__add__,
                mul_=self.mul,
            )

    def cache_info(self) -> dict[str, int]:
        return {
            "generator_products": self._times_generator.cache_info().currsize,
            "monomial_products": self._times_monomial.cache_info().currsize,
            "power_tables": sum(len(t) for t in self._power_tables.values()),
        }

    def clear_caches(self) -> None:
        with self._power_lock:
            self._times_generator.cache_clear()
            self._times_monomial.cache_clear()
            self._power_tables.clear()

    # -- sigma, sigma^-1, delta -----------------------------------------------

    def _check_support(self, p: NcPoly, bound: int, what: str) -> None:
        if p.arity != self.arity:
            raise ArityError(f"element of arity {p.arity} used in a tower of arity {self.arity}")
        if p.support() >= bound:
            raise SupportError(
                f"{what} is only defined below {self._names[bound]}, got {self.render(p)}"
            )

    def apply_morphism(self, images: Sequence[NcPoly], p: NcPoly) -> NcPoly:
        """Extend generator images multiplicatively over the PBW monomials of ``p``.

        ``images[a]`` is the image of generator ``a``; ``p`` may only use the
        generators that have an image.
        """
        self._check_support(p, len(images), "this map")
        total: dict[Monomial, Fraction] = {}
        with self._metered():
            for mono, c in p._terms.items():
                term = self.one()
                for a in range(len(images)):
                    for _ in range(mono[a]):
                        term = self.mul(term, images[a])
                for m2, c2 in term._terms.items():
                    _accumulate(total, m2, c * c2)
        return NcPoly._wrap(self.arity, _prune(total))

    def apply_endo(self, i: int, p: NcPoly) -> NcPoly:
        k = self.check_step(i)
        self._check_support(p, k, f"sigma_{self._names[k]}")
        return self.apply_morphism(self._steps[k].sigma, p)

    def apply_inverse_endo(self, i: int, p: NcPoly) -> NcPoly:
        k = self.check_step(i)
        self._check_support(p, k, f"sigma_{self._names[k]}^-1")
        return self.apply_morphism(self._steps[k].sigma_inv, p)

    def apply_skew_derivation(self, i: int, p: NcPoly) -> NcPoly:
        """delta_i(p) through d(u*y) = d(u)*y + sigma(u)*d(y), letter by letter."""
        k = self.check_step(i)
        self._check_support(p, k, f"delta_{self._names[k]}")
        return self._derive(k, p)

    def _derive(self, k: int, p: NcPoly) -> NcPoly:
        step = self._steps[k]
        total = self.zero()
        with self._metered():
            for mono, c in p._terms.items():
                sig = self.one()
                der = self.zero()
                for a in range(k):
                    gen = self.generator(a)
                    for _ in range(mono[a]):
                        der = self.mul(der, gen) + self.mul(sig, step.delta[a])
                        sig = self.mul(sig, step.sigma[a])
                total = total + der.scale(c)
        return total

    def commutator(self, b: int, a: int) -> NcPoly:
        """Normal form of ``x_b * x_a - x_a * x_b`` for generator positions ``b``, ``a``."""
        xb, xa = self.generator(b), self.generator(a)
        return self.mul(xb, xa) - self.mul(xa, xb)


def character_residuals(
    tower: Tower,
    values: Sequence[Any],
    *,
    upto: int | None = None,
    evaluate: Callable[[NcPoly], Any] | None = None,
) -> list[tuple[int, int, Any]]:
    """Defining relations evaluated at an assignment of generator values.

    Returns ``(j, i, v_j*v_i - v(sigma_j(x_i))*v_j - v(delta_j(x_i)))`` for every
    pair of positions ``i < j < upto``; the assignment extends to an algebra
    map exactly when all residuals vanish.
    """
    upto = tower.arity if upto is None else upto
    if evaluate is None:
        evaluate = lambda p: p.evaluate(values)  # noqa: E731
    out = []
    for j in range(1, upto):
        step = tower.steps[j]
        for i in range(j):
            residual = values[j] * values[i] - evaluate(step.sigma[i]) * values[j] - evaluate(step.delta[i])
            out.append((j, i, residual))
    return out


def normal_form(expr: Expr | NcPoly, tower: Tower) -> NcPoly:
    return tower.normal_form(expr)


def mul(p: NcPoly, q: NcPoly, tower: Tower) -> NcPoly:
    return tower.mul(p, q)


def apply_endo(i: int, p: NcPoly, tower: Tower) -> NcPoly:
    return tower.apply_endo(i, p)


def apply_skew_derivation(i: int, p: NcPoly, tower: Tower) -> NcPoly:
    return tower.apply_skew_derivation(i, p)


# ---------------------------------------------------------------------------
# Independent oracle
# ---------------------------------------------------------------------------

Word = tuple[int, ...]


def _word_of(mono: Monomial) -> Word:
    return tuple(a for a, e in enumerate(mono) for _ in range(e))


def _first_inversion(word: Word) -> int | None:
    for t in range(len(word) - 1):
        if word[t] > word[t + 1]:
            return t
    return None


def naive_normal_form(expr: Expr | NcPoly, tower: Tower) -> NcPoly:
    """Normal form by repeatedly rewriting the leftmost out-of-order letter pair.

    Works on plain words and shares nothing with the memoized engine except the
    tower data, so it serves as a cross-check.
    """
    if isinstance(expr, NcPoly):
        expr = as_expression(expr, tower.names)

    def word_mul(u: dict[Word, Fraction], v: dict[Word, Fraction]) -> dict[Word, Fraction]:
        acc: dict[Word, Fraction] = {}
        for w1, c1 in u.items():
            for w2, c2 in v.items():
                _accumulate(acc, w1 + w2, c1 * c2)
        return _prune(acc)

    def word_add(u: dict[Word, Fraction], v: dict[Word, Fraction]) -> dict[Word, Fraction]:
        acc = dict(u)
        for w, c in v.items():
            _accumulate(acc, w, c)
        return _prune(acc)

    pending = fold_expression(
        expr,
        const=lambda c: {(): c} if c else {},
        gen=lambda name: {(tower.index(name),): Fraction(1)},
        add_=word_add,
        mul_=word_mul,
    )
    pending = dict(pending)
    done: dict[Monomial, Fraction] = {}
    rewrites = 0
    while pending:
        word, coeff = pending.popitem()
        if not coeff:
            continue
        t = _first_inversion(word)
        if t is None:
            mono = [0] * tower.arity
            for a in word:
                mono[a] += 1
            _accumulate(done, tuple(mono), coeff)
            continue
        rewrites += 1
        if rewrites > tower.rewrite_budget:
            raise RewriteBudgetExceeded(f"naive rewriting needed more than {tower.rewrite_budget} steps")
        j, i = word[t], word[t + 1]
        prefix, suffix = word[:t], word[t + 2:]
        step = tower.steps[j]
        for mono, c in step.sigma[i]._terms.items():
            _accumulate(pending, prefix + _word_of(mono) + (j,) + suffix, coeff * c)
        for mono, c in step.delta[i]._terms.items():
            _accumulate(pending, prefix + _word_of(mono) + suffix, coeff * c)
    return NcPoly._wrap(tower.arity, _prune(done))


# ---------------------------------------------------------------------------
# Well-definedness
# ---------------------------------------------------------------------------

SIGMA_RELATION_BASIS = "sigma_i is an algebra map: it sends each defining relation of the coefficient algebra to zero"
DELTA_RELATION_BASIS = "delta_i is a sigma_i-derivation: twisted Leibniz agrees on both sides of each relation"
INVERSE_BASIS = "sigma_i composed with the supplied sigma_i^-1 is the identity on generators, both ways"
INVERSE_RELATION_BASIS = "sigma_i^-1 is an algebra map: it sends each defining relation to zero"


def validate_tower(tower: Tower) -> ValidationReport:
    """Check that every sigma_i / delta_i is well defined on the relations below it."""
    report = ValidationReport(title="tower")
    names = tower.names
    render = tower.render
    for k in range(1, tower.arity):
        i = k + 1
        step = tower.steps[k]
        s, s_inv, d = step.sigma, step.sigma_inv, step.delta
        for b in range(k):
            lower = tower.steps[b]
            xb = tower.generator(b)
            for a in range(b):
                xa = tower.generator(a)
                sig_ba, del_ba = lower.sigma[a], lower.delta[a]
                tag = f"{names[k]};{names[b]},{names[a]}"

                residual = (
                    tower.mul(s[b], s[a])
                    - tower.mul(tower.apply_endo(i, sig_ba), s[b])
                    - tower.apply_endo(i, del_ba)
                )
                report.add(CheckResult.from_residual(f"tower.sigma-relation[{tag}]", residual, render, SIGMA_RELATION_BASIS))

                lhs = tower.mul(d[b], xa) + tower.mul(s[b], d[a])
                rhs = (
                    tower.mul(tower.apply_skew_derivation(i, sig_ba), xb)
                    + tower.mul(tower.apply_endo(i, sig_ba), d[b])
                    + tower.apply_skew_derivation(i, del_ba)
                )
                report.add(CheckResult.from_residual(f"tower.delta-relation[{tag}]", lhs - rhs, render, DELTA_RELATION_BASIS))

                residual = (
                    tower.mul(s_inv[b], s_inv[a])
                    - tower.mul(tower.apply_inverse_endo(i, sig_ba), s_inv[b])
                    - tower.apply_inverse_endo(i, del_ba)
                )
                report.add(CheckResult.from_residual(f"tower.sigma-inverse-relation[{tag}]", residual, render, INVERSE_RELATION_BASIS))
        for a in range(k):
            xa = tower.generator(a)
            tag = f"{names[k]};{names[a]}"
            forward = tower.apply_endo(i, s_inv[a]) - xa
            backward = tower.apply_inverse_endo(i, s[a]) - xa
            report.add(CheckResult.from_residual(f"tower.sigma-inverse[{tag}]", forward, render, INVERSE_BASIS))
            report.add(CheckResult.from_residual(f"tower.inverse-sigma[{tag}]", backward, render, INVERSE_BASIS))
    log.info("validated tower %s: %d checks, status %s", ",".join(names), len(report.checks), report.status.value)
    return report
