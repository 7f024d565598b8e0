"""Tensor powers of a tower: elements of T(x)T and T(x)T(x)T.

A tensor is a dict keyed by tuples of PBW monomials, one per slot. Slots are
never mixed, so every component stays in normal form and equality is plain
map equality.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, ClassVar, Iterator, Mapping, Sequence, Union

from .errors import ArityError, SupportError
from .ore_core import (
    Monomial,
    NcPoly,
    Tower,
    _accumulate,
    _prune,
    default_names,
    highest_generator,
    monomial_key,
    render_monomial,
    render_terms,
    to_scalar,
)

log = logging.getLogger(__name__)

Key = tuple[Monomial, ...]


class Tensor:
    """Finite linear combination of pure tensors of PBW monomials."""

    order: ClassVar[int] = 0

    __slots__ = ("arity", "_terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[Sequence[Sequence[int]], Any] | None = None) -> None:
        clean: dict[Key, Fraction] = {}
        for key, coeff in (terms or {}).items():
            key = tuple(tuple(int(e) for e in mono) for mono in key)
            if len(key) != self.order:
                raise ArityError(f"{type(self).__name__} keys have {self.order} slots, got {len(key)}")
            if any(len(mono) != arity for mono in key):
                raise ArityError(f"component of {key} does not have arity {arity}")
            c = to_scalar(coeff)
            if c:
                clean[key] = clean.get(key, 0) + c
        self.arity = arity
        self._terms = _prune(clean)
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, arity: int, terms: dict[Key, Fraction]):
        t = cls.__new__(cls)
        t.arity = arity
        t._terms = terms
        t._hash = None
        return t

    @classmethod
    def zero(cls, arity: int):
        return cls._wrap(arity, {})

    @classmethod
    def one(cls, arity: int):
        return cls._wrap(arity, {((0,) * arity,) * cls.order: Fraction(1)})

    @classmethod
    def outer(cls, *factors: NcPoly):
        """The pure tensor ``f1 (x) f2 (x) ...``."""
        if len(factors) != cls.order:
            raise ArityError(f"{cls.__name__} needs {cls.order} factors, got {len(factors)}")
        arity = factors[0].arity
        if any(f.arity != arity for f in factors):
            raise ArityError("tensor factors must share an arity")
        acc: dict[Key, Fraction] = {(): Fraction(1)}
        for factor in factors:
            nxt: dict[Key, Fraction] = {}
            for key, c in acc.items():
                for mono, c2 in factor.terms.items():
                    nxt[key + (mono,)] = c * c2
            acc = nxt
        return cls._wrap(arity, _prune(acc))

    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Key, Fraction]]:
        return sorted(
            self._terms.items(),
            key=lambda kv: tuple(monomial_key(m) for m in kv[0]),
            reverse=True,
        )

    def __iter__(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def support(self) -> int:
        """Highest generator position used in any slot."""
        return max((highest_generator(m) for key in self._terms for m in key), default=-1)

    def _check(self, other: "Tensor") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.arity != self.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "Tensor"):
        self._check(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            _accumulate(acc, key, c)
        return type(self)._wrap(self.arity, _prune(acc))

    def __neg__(self):
        return type(self)._wrap(self.arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "Tensor"):
        return self + (-other)

    def scale(self, value: Any):
        c = to_scalar(value)
        if not c:
            return type(self).zero(self.arity)
        return type(self)._wrap(self.arity, {k: c * v for k, v in self._terms.items()})

    def extend(self, arity: int):
        pad = (0,) * (arity - self.arity)
        if arity < self.arity:
            raise ArityError(f"cannot extend arity {self.arity} to {arity}")
        return type(self)._wrap(arity, {tuple(m + pad for m in k): c for k, c in self._terms.items()})

    def restrict(self, arity: int):
        if self.support() >= arity:
            raise SupportError(f"tensor uses generator position {self.support()} outside the first {arity}")
        return type(self)._wrap(arity, {tuple(m[:arity] for m in k): c for k, c in self._terms.items()})

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.arity)
        return render_terms(
            [(c, " ox ".join(render_monomial(m, names) for m in key), False) for key, c in self.items()]
        )

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.arity == other.arity and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.arity, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.render()})"

    # -- slot-wise maps -------------------------------------------------------

    def map_slot(self, slot: int, fn: Callable[[NcPoly], NcPoly]):
        """Apply a linear map on T to one slot."""
        cache: dict[Monomial, NcPoly] = {}
        acc: dict[Key, Fraction] = {}
        for key, c in self._terms.items():
            mono = key[slot]
            image = cache.get(mono)
            if image is None:
                image = cache[mono] = fn(NcPoly.monomial(mono))
            for m2, c2 in image.terms.items():
                _accumulate(acc, key[:slot] + (m2,) + key[slot + 1:], c * c2)
        return type(self)._wrap(self.arity, _prune(acc))

    def expand_slot(self, slot: int, fn: Callable[[NcPoly], "Tensor2"]) -> "Tensor":
        """Apply a linear map T -> T(x)T to one slot, raising the order by one."""
        target = _tensor_class(self.order + 1)
        cache: dict[Monomial, Tensor2] = {}
        acc: dict[Key, Fraction] = {}
        for key, c in self._terms.items():
            mono = key[slot]
            image = cache.get(mono)
            if image is None:
                image = cache[mono] = fn(NcPoly.monomial(mono))
            for pair, c2 in image._terms.items():
                _accumulate(acc, key[:slot] + pair + key[slot + 1:], c * c2)
        return target._wrap(self.arity, _prune(acc))

    def contract_slot(self, slot: int, fn: Callable[[NcPoly], Any]) -> Union["Tensor", NcPoly]:
        """Apply a linear functional to one slot, lowering the order by one.

        Contracting a ``Tensor2`` gives an ``NcPoly``.
        """
        cache: dict[Monomial, Fraction] = {}
        acc: dict[Key, Fraction] = {}
        for key, c in self._terms.items():
            mono = key[slot]
            value = cache.get(mono)
            if value is None:
                value = cache[mono] = to_scalar(fn(NcPoly.monomial(mono)))
            if value:
                _accumulate(acc, key[:slot] + key[slot + 1:], c * value)
        acc = _prune(acc)
        if self.order == 2:
            return NcPoly._wrap(self.arity, {key[0]: c for key, c in acc.items()})
        return _tensor_class(self.order - 1)._wrap(self.arity, acc)

    def insert_one(self, slot: int) -> "Tensor":
        """Insert a ``1`` factor at ``slot``: ``w -> w (x) 1`` for ``slot == order``."""
        one = (0,) * self.arity
        target = _tensor_class(self.order + 1)
        return target._wrap(
            self.arity, {key[:slot] + (one,) + key[slot:]: c for key, c in self._terms.items()}
        )


class Tensor2(Tensor):
    order = 2

    __slots__ = ()


class Tensor3(Tensor):
    order = 3

    __slots__ = ()


def _tensor_class(order: int) -> type[Tensor]:
    try:
        return {2: Tensor2, 3: Tensor3}[order]
    except KeyError:
        raise ArityError(f"tensor order {order} is not supported") from None


def _tensor_mul(u: Tensor, v: Tensor, tower: Tower) -> Tensor:
    u._check(v)
    if u.arity != tower.arity:
        raise ArityError(f"tensor of arity {u.arity} used in a tower of arity {tower.arity}")
    acc: dict[Key, Fraction] = {}
    for k1, c1 in u._terms.items():
        for k2, c2 in v._terms.items():
            partial: dict[Key, Fraction] = {(): c1 * c2}
            for m1, m2 in zip(k1, k2):
                nxt: dict[Key, Fraction] = {}
                product = tower.multiply_monomials(m1, m2)
                for key, c in partial.items():
                    for m3, c3 in product.items():
                        nxt[key + (m3,)] = c * c3
                partial = nxt
            for key, c in partial.items():
                _accumulate(acc, key, c)
    return type(u)._wrap(u.arity, _prune(acc))


def t2_mul(u: Tensor2, v: Tensor2, tower: Tower) -> Tensor2:
    """``(a (x) b)(c (x) d) = ac (x) bd``, extended bilinearly."""
    return _tensor_mul(u, v, tower)


def t3_mul(u: Tensor3, v: Tensor3, tower: Tower) -> Tensor3:
    return _tensor_mul(u, v, tower)


def lift_left(f: Callable[[NcPoly], NcPoly], u: Tensor) -> Tensor:
    return u.map_slot(0, f)


def lift_right(f: Callable[[NcPoly], NcPoly], u: Tensor) -> Tensor:
    return u.map_slot(u.order - 1, f)


def embed_12(f: Callable[[NcPoly], Tensor2], u: Tensor2) -> Tensor3:
    """``(f (x) Id)(u)``; with ``f`` the coproduct this is ``(Delta (x) Id)``."""
    return u.expand_slot(0, f)


def embed_23(f: Callable[[NcPoly], Tensor2], u: Tensor2) -> Tensor3:
    return u.expand_slot(1, f)


def contract_left(phi: Callable[[NcPoly], Any], u: Tensor) -> Union[Tensor, NcPoly]:
    """``(phi (x) Id)(u)`` for a functional ``phi`` such as a character."""
    return u.contract_slot(0, phi)


def contract_right(phi: Callable[[NcPoly], Any], u: Tensor) -> Union[Tensor, NcPoly]:
    return u.contract_slot(u.order - 1, phi)


def mu(u: Tensor2, tower: Tower) -> NcPoly:
    """Multiply the two slots: ``sum a_i * b_i``."""
    acc: dict[Monomial, Fraction] = {}
    for (m1, m2), c in u.terms.items():
        for m3, c3 in tower.multiply_monomials(m1, m2).items():
            _accumulate(acc, m3, c * c3)
    return NcPoly._wrap(u.arity, _prune(acc))
