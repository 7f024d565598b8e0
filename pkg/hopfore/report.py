"""Check results, axiom reports and the machine-readable CLI report."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable

log = logging.getLogger(__name__)

TOOL_NAME = "hopfore"
TOOL_VERSION = "0.3.0"

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "assets" / "schema" / "report.schema.json"


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNRESOLVED = "unresolved"


# Where each check family is stated; keyed by the check name up to "[".
CITATIONS: dict[str, str] = {
    "tower.sigma-relation": "§2.1 (sigma an algebra automorphism)",
    "tower.sigma-inverse": "§2.1 (sigma an algebra automorphism)",
    "tower.inverse-sigma": "§2.1 (sigma an algebra automorphism)",
    "tower.sigma-inverse-relation": "§2.1 (sigma an algebra automorphism)",
    "tower.delta-relation": "§2.1 (sigma-derivation)",
    "hopf.coproduct-relation": "Thm 2.4(ii)",
    "hopf.coassociativity": "Lemma 2.2",
    "hopf.counit-left": "Thm 2.4(i)(f)",
    "hopf.counit-right": "Thm 2.4(i)(f)",
    "hopf.counit-relation": "Eq. (2.9)",
    "hopf.antipode-left": "Thm 2.4(i)(f)",
    "hopf.antipode-right": "Thm 2.4(i)(f)",
    "hopf.antipode-relation": "Thm 2.4(i)(c)",
    "hopf.primitive-dimension": "Thm 3.2(iii)",
    "hoe.winding-left": "Thm 2.4(i)(d), Eq. (2.11)",
    "hoe.winding-right": "Thm 2.4(i)(d)",
    "hoe.winding-character": "Thm 2.4(i)(d)",
    "hoe.derivation": "Thm 2.4(i)(e), Eq. (2.12)",
    "hoe.cocycle": "Thm 2.4(i)(f), Eq. (2.13)",
    "hoe.antipode-tail": "Thm 2.4(i)(f), Eq. (2.14)",
    "hoe.augmentation-left": "Thm 2.4(i)(f)",
    "hoe.augmentation-right": "Thm 2.4(i)(f)",
    "antipode.order": "Thm 3.2(viii), Eq. (3.5)",
    "s4.winding": "Thm 3.2(ix)",
    "s4.decomposition": "Thm 3.2(ix)",
    "character.relations": "§1.7",
    "characters.solved": "§4.1",
    "classify.consistency": "Thm 4.5",
    "fiber.decided": "Thm 4.2(i)-(iii), Prop 4.3",
    "engine.rewrite-budget": "Eq. (2.1)",
    "property.oracle": "Eq. (2.1)",
    "property.associativity": "Eq. (2.1)",
    "property.coproduct-multiplicative": "Thm 2.4(ii)",
    "property.antipode-axiom": "Thm 2.4(i)(f)",
    "property.winding-left": "Thm 2.4(i)(d)",
    "property.winding-right": "Thm 2.4(i)(d)",
    "property.change-variable": "§2.4",
    "property.round-trip": "Prop 2.7",
}


def cite(name: str) -> str | None:
    """Citation for a check name such as ``hoe.derivation[Z;X]``."""
    return CITATIONS.get(name.partition("[")[0])


@dataclass
class CheckResult:
    """One named verification with its verdict.

    ``citation`` defaults to the entry of ``CITATIONS`` for the check's family.
    ``residual`` keeps the exact nonzero object behind a failure so callers can
    re-evaluate it; it never reaches the JSON output.
    """

    name: str
    status: Status
    basis: str
    witness: str | None = None
    detail: str | None = None
    residual: Any = field(default=None, repr=False, compare=False)
    citation: str | None = None

    def __post_init__(self) -> None:
        if self.citation is None:
            self.citation = cite(self.name)

    @classmethod
    def from_residual(cls, name: str, residual: Any, render: Callable[[Any], str], basis: str) -> "CheckResult":
        """Pass iff ``residual.is_zero()``; otherwise fail with the rendered residual."""
        if residual.is_zero():
            return cls(name=name, status=Status.PASS, basis=basis)
        return cls(name=name, status=Status.FAIL, basis=basis, witness=render(residual), residual=residual)

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "witness": self.witness,
            "basis": self.basis,
            "citation": self.citation,
        }


def combine_status(statuses: Iterable[Status]) -> Status:
    """Fail dominates unresolved, which dominates pass."""
    seen = set(statuses)
    if Status.FAIL in seen:
        return Status.FAIL
    if Status.UNRESOLVED in seen:
        return Status.UNRESOLVED
    return Status.PASS


@dataclass
class AxiomReport:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        if check.status is Status.FAIL:
            log.debug("%s: %s failed, witness %s", self.title, check.name, check.witness)
        return check

    @property
    def status(self) -> Status:
        return combine_status(c.status for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status is Status.FAIL]


class ValidationReport(AxiomReport):
    """Well-definedness report of a tower's sigma/delta data."""


# exit codes of the command line
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNRESOLVED = 3


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class Report:
    """What a CLI invocation prints: named checks plus command-specific results."""

    command: str
    algebra: str
    input_digest: str
    checks: list[CheckResult] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)

    def add_checks(self, checks: Iterable[CheckResult]) -> None:
        self.checks.extend(checks)

    @property
    def status(self) -> Status:
        return combine_status(c.status for c in self.checks)

    def summary(self) -> dict[str, int]:
        counts = {s.value: 0 for s in Status}
        for check in self.checks:
            counts[check.status.value] += 1
        return counts

    def exit_code(self) -> int:
        status = self.status
        if status is Status.FAIL:
            return EXIT_FAIL
        if status is Status.UNRESOLVED:
            return EXIT_UNRESOLVED
        return EXIT_PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "input_digest": self.input_digest,
            "command": self.command,
            "algebra": self.algebra,
            "checks": [c.to_dict() for c in self.checks],
            "results": self.results,
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"{TOOL_NAME} {self.command}: {self.algebra}"]
        for key in sorted(self.results):
            value = self.results[key]
            if isinstance(value, list):
                lines.append(f"{key}:")
                lines.extend(f"  {item}" for item in value)
            else:
                lines.append(f"{key}: {value}")
        for check in self.checks:
            line = f"{check.status.value.upper():<10} {check.name}"
            if check.citation is not None:
                line += f"  [{check.citation}]"
            if check.witness is not None:
                line += f"  witness: {check.witness}"
            lines.append(line)
        summary = self.summary()
        lines.append(
            f"summary: {summary['pass']} pass, {summary['fail']} fail, {summary['unresolved']} unresolved"
        )
        return "\n".join(lines)


def load_schema() -> dict[str, Any]:
    with open(SCHEMA_PATH, "r", encoding="utf-8") as f:
        return json.load(f)
