"""Named example algebras.

Each builtin is a presentation in the ``.hopf`` language, so the builtins and
user files go through the same elaboration. The parameterized families take
their values as ``A(l1,l2,a)`` and ``B(l)``.
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from functools import lru_cache

from .dsl import parse
from .errors import BuiltinError, PresentationError
from .hopf import HopfTower
from .ore_core import DEFAULT_REWRITE_BUDGET, to_scalar

log = logging.getLogger(__name__)

SOURCES: dict[str, str] = {
    "k": """
algebra "k"
""",
    "heisenberg": """
algebra "heisenberg"
# [x, y] = [x, z] = [y, z] = 0 with x non-primitive
gen y
gen z
gen x { w: y ox z }
""",
    "solv2-der": """
algebra "solv2-der"
# [y, x] = x as a differential extension
gen x
gen y { delta: x -> x }
""",
    "solv2-auto": """
algebra "solv2-auto"
# the same algebra as an automorphism extension
gen y
gen x {
  sigma: y -> y - 1
  sigma_inv: y -> y + 1
}
""",
    "usl2": """
algebra "usl2"
gen h
gen e {
  sigma: h -> h - 2
  sigma_inv: h -> h + 2
}
gen f {
  sigma: h -> h + 2; e -> e
  sigma_inv: h -> h - 2; e -> e
  delta: e -> -h
}
""",
    "A": """
algebra "A"
param lambda1
param lambda2
param alpha
gen Y
gen X
gen Z {
  delta: Y -> lambda2*Y; X -> lambda1*X - alpha*Y
  w: X ox Y - Y ox X
}
""",
    "B": """
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
""",
}

FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "A": ("lambda1", "lambda2", "alpha"),
    "B": ("lambda",),
}

BUILTIN_NAMES: tuple[str, ...] = ("k", "heisenberg", "solv2-der", "solv2-auto", "usl2", "A(l1,l2,a)", "B(l)")

_CALL = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")


def _arguments(family: str, raw: str | None) -> dict[str, Fraction]:
    expected = FAMILY_PARAMS[family]
    if raw is None:
        raise BuiltinError(f"{family} needs {len(expected)} parameter(s): {family}({','.join(expected)})")
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != len(expected):
        raise BuiltinError(f"{family} takes {len(expected)} parameter(s), got {len(parts)}")
    try:
        values = [to_scalar(p) for p in parts]
    except (ValueError, ZeroDivisionError):
        raise BuiltinError(f"parameters of {family} must be rationals, got {raw!r}") from None
    return dict(zip(expected, values))


def _check_family(family: str, values: dict[str, Fraction]) -> None:
    if family != "A":
        return
    alpha = values["alpha"]
    if alpha not in (0, 1):
        raise BuiltinError(f"alpha must be 0 or 1, got {alpha}")
    if alpha and values["lambda1"] != values["lambda2"]:
        raise BuiltinError("alpha = 1 needs lambda1 = lambda2")


@lru_cache(maxsize=64)
def _build(family: str, frozen_params: tuple[tuple[str, Fraction], ...], label: str, budget: int) -> HopfTower:
    try:
        ht = parse(SOURCES[family], dict(frozen_params), rewrite_budget=budget)
    except PresentationError as exc:
        raise BuiltinError(f"builtin {label} does not elaborate: {exc}") from exc
    return ht.replace(name=label)


def builtin(name: str, *, rewrite_budget: int = DEFAULT_REWRITE_BUDGET) -> HopfTower:
    """The builtin called ``name``, e.g. ``usl2`` or ``B(1/2)``."""
    match = _CALL.match(name)
    if not match:
        raise BuiltinError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    family, raw = match.group(1), match.group(2)
    if family not in SOURCES:
        raise BuiltinError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    if family in FAMILY_PARAMS:
        values = _arguments(family, raw)
        _check_family(family, values)
        label = f"{family}({','.join(str(values[p]) for p in FAMILY_PARAMS[family])})"
    else:
        if raw is not None:
            raise BuiltinError(f"{family} takes no parameters")
        values = {}
        label = family
    log.debug("building %s", label)
    return _build(family, tuple(values.items()), label, rewrite_budget)


def builtin_source(family: str) -> str:
    """Presentation text of a builtin family, parameters left unbound."""
    try:
        return SOURCES[family].lstrip("\n")
    except KeyError:
        raise BuiltinError(f"unknown builtin family {family!r}") from None
