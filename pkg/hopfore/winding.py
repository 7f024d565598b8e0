"""Characters of a Hopf tower and the winding automorphisms they induce.

Conventions, fixed by the composition laws below:

    tau_left(chi)  = (chi (x) Id) o Delta
    tau_right(chi) = (Id (x) chi) o Delta
    (chi * psi)    = (chi (x) psi) o Delta
    tau_left(chi) o tau_left(psi)   = tau_left(psi * chi)
    tau_right(chi) o tau_right(psi) = tau_right(chi * psi)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .errors import CharacterError, UnknownGeneratorError, WindingError
from .hopf import HopfTower, antipode_power
from .ore_core import NcPoly, Tower, character_residuals, to_scalar
from .report import AxiomReport, CheckResult, Status
from .tensor import contract_left, contract_right

log = logging.getLogger(__name__)

CHARACTER_BASIS = "an assignment of generator values is a character iff every defining relation evaluates to zero"
S4_BASIS = "S^4 = tau_left(chi) o tau_right(chi o S) on generators (Thm 3.2(ix))"


@dataclass(frozen=True)
class Character:
    """Generator values of an algebra map to the rationals."""

    names: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.values):
            raise CharacterError(f"{len(self.names)} generators but {len(self.values)} values")

    @classmethod
    def from_values(cls, ht: HopfTower | Tower, values: Sequence[Any]) -> "Character":
        names = ht.names
        if len(values) != len(names):
            raise CharacterError(f"expected {len(names)} values for {', '.join(names)}, got {len(values)}")
        return cls(tuple(names), tuple(to_scalar(v) for v in values))

    @classmethod
    def from_mapping(cls, ht: HopfTower | Tower, mapping: Mapping[str, Any]) -> "Character":
        names = tuple(ht.names)
        unknown = sorted(set(mapping) - set(names))
        if unknown:
            raise UnknownGeneratorError(f"no generator named {', '.join(unknown)}")
        missing = [n for n in names if n not in mapping]
        if missing:
            raise CharacterError(f"no value assigned to {', '.join(missing)}")
        return cls(names, tuple(to_scalar(mapping[n]) for n in names))

    @classmethod
    def counit(cls, ht: HopfTower) -> "Character":
        return cls(tuple(ht.names), ht.counit_values)

    def __call__(self, p: NcPoly) -> Fraction:
        return p.evaluate(self.values)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.names, self.values))

    def render(self) -> str:
        return ", ".join(f"{n} -> {v}" for n, v in zip(self.names, self.values))


def _tower_of(ht: HopfTower | Tower) -> Tower:
    return ht.tower if isinstance(ht, HopfTower) else ht


def validate_character(chi: Character, ht: HopfTower | Tower) -> CheckResult:
    tower = _tower_of(ht)
    if chi.names != tower.names:
        raise CharacterError(f"character on {', '.join(chi.names)} used on {', '.join(tower.names)}")
    for j, i, value in character_residuals(tower, chi.values):
        if value:
            return CheckResult(
                name="character.relations",
                status=Status.FAIL,
                basis=CHARACTER_BASIS,
                witness=f"{tower.names[j]}*{tower.names[i]} relation evaluates to {value}",
                residual=tower.constant(value),
            )
    return CheckResult(name="character.relations", status=Status.PASS, basis=CHARACTER_BASIS)


@dataclass(frozen=True)
class WindingMap:
    """An algebra endomorphism given by the images of the generators."""

    tower: Tower
    images: tuple[NcPoly, ...]
    label: str = ""

    def apply(self, p: NcPoly) -> NcPoly:
        return self.tower.apply_morphism(self.images, p)

    def __call__(self, p: NcPoly) -> NcPoly:
        return self.apply(p)

    def compose(self, other: "WindingMap") -> "WindingMap":
        """``self o other``: apply ``other`` first."""
        return WindingMap(
            self.tower,
            tuple(self.apply(image) for image in other.images),
            f"{self.label} o {other.label}",
        )

    def relation_residuals(self) -> list[tuple[int, int, NcPoly]]:
        tower = self.tower
        out = []
        for j in range(1, tower.arity):
            step = tower.steps[j]
            for i in range(j):
                residual = (
                    tower.mul(self.images[j], self.images[i])
                    - tower.mul(self.apply(step.sigma[i]), self.images[j])
                    - self.apply(step.delta[i])
                )
                out.append((j, i, residual))
        return out

    def render(self) -> list[str]:
        return [f"{n} -> {self.tower.render(p)}" for n, p in zip(self.tower.names, self.images)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WindingMap):
            return NotImplemented
        return self.tower == other.tower and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)


def _checked_winding(ht: HopfTower, images: tuple[NcPoly, ...], label: str) -> WindingMap:
    winding = WindingMap(ht.tower, images, label)
    for j, i, residual in winding.relation_residuals():
        if not residual.is_zero():
            raise WindingError(
                f"{label} does not respect the {ht.names[j]}*{ht.names[i]} relation: "
                f"residual {ht.render(residual)}"
            )
    return winding


def tau_left(chi: Character, ht: HopfTower) -> WindingMap:
    images = tuple(
        contract_left(chi, ht.coproduct(ht.tower.generator(k))) for k in range(ht.arity)
    )
    return _checked_winding(ht, images, f"tau_left({chi.render()})")


def tau_right(chi: Character, ht: HopfTower) -> WindingMap:
    images = tuple(
        contract_right(chi, ht.coproduct(ht.tower.generator(k))) for k in range(ht.arity)
    )
    return _checked_winding(ht, images, f"tau_right({chi.render()})")


def _require_valid(chi: Character, ht: HopfTower, what: str) -> Character:
    check = validate_character(chi, ht)
    if not check.passed:
        raise CharacterError(f"{what} is not a character: {check.witness}")
    return chi


def convolve(chi: Character, psi: Character, ht: HopfTower) -> Character:
    """``(chi * psi)(x) = (chi (x) psi) Delta(x)``."""
    values = tuple(
        psi(contract_left(chi, ht.coproduct(ht.tower.generator(k)))) for k in range(ht.arity)
    )
    return _require_valid(Character(tuple(ht.names), values), ht, "convolution")


def char_inverse(chi: Character, ht: HopfTower) -> Character:
    values = tuple(chi(ht.antipode(ht.tower.generator(k))) for k in range(ht.arity))
    return _require_valid(Character(tuple(ht.names), values), ht, "inverse")


def transport_character(m: Character, chi: Character, ht: HopfTower) -> Character:
    """``m o tau_left(chi)``, the image of ``m`` under the left winding by ``chi``."""
    winding = tau_left(chi, ht)
    values = tuple(m(image) for image in winding.images)
    return _require_valid(Character(tuple(ht.names), values), ht, "transported character")


def check_s4_windings(ht: HopfTower, chi: Character) -> AxiomReport:
    """Compare S^4 with tau_left(chi) o tau_right(chi o S) on every generator."""
    report = AxiomReport(title="s4")
    composite = tau_left(chi, ht).compose(tau_right(char_inverse(chi, ht), ht))
    for k in range(ht.arity):
        x = ht.tower.generator(k)
        residual = antipode_power(x, 4, ht) - composite.images[k]
        report.add(CheckResult.from_residual(f"s4.winding[{ht.names[k]}]", residual, ht.render, S4_BASIS))
    log.info("S^4 winding check for %s: %s", ht.name, report.status.value)
    return report
