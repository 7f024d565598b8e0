"""Command line interface: ``python -m hopfore <command> FILE ...``.

FILE is a ``.hopf`` presentation or ``builtin:NAME``. Every command prints a
report on standard output (text, or JSON with ``--json``) and exits with

    0  every check passed
    1  at least one check failed
    2  the input could not be read
    3  something stayed unresolved and nothing failed
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

from .builtins import BUILTIN_NAMES, builtin
from .classic import (
    CLOSURE_NOTE,
    FIBER_BASIS,
    ExtensionType,
    FiberKind,
    character_variety,
    classify_extension,
    goodearl_fiber,
    normality_search,
)
from .config import WorkbenchConfig, load_config
from .dsl import parse, parse_expression, serialize
from .errors import CharacterError, PresentationError, RewriteBudgetExceeded, UnknownGeneratorError, WorkbenchError
from .hopf import (
    GK_BASIS,
    HopfTower,
    OrderVerdict,
    antipode_order,
    antipode_power,
    check_hoe_conditions,
    check_hopf_axioms,
    gk_dimension,
    primitive_dimension_bounds,
    primitives,
    s4_decompose,
)
from .ore_core import to_scalar, validate_tower
from .properties import run_properties
from .report import EXIT_INPUT, EXIT_UNRESOLVED, CheckResult, Report, Status, digest_text
from .winding import Character, check_s4_windings

log = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
BUILTIN_PREFIX = "builtin:"


class Session:
    """What every command needs: the parsed arguments, configuration and input."""

    def __init__(self, args: argparse.Namespace, config: WorkbenchConfig) -> None:
        self.args = args
        self.config = config
        self.budget = args.rewrite_budget or config.rewrite_budget
        self.seed = args.seed if args.seed is not None else config.default_seed
        self.source = getattr(args, "file", None) or ""
        self.text = ""

    def params(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for item in self.args.param or []:
            name, sep, value = item.partition("=")
            if not sep or not name.strip():
                raise PresentationError("syntax", f"--param expects NAME=VALUE, got {item!r}")
            out[name.strip()] = value.strip()
        return out

    def load(self) -> HopfTower:
        if self.source.startswith(BUILTIN_PREFIX):
            ht = builtin(self.source[len(BUILTIN_PREFIX):], rewrite_budget=self.budget)
            self.text = serialize(ht)
            return ht
        path = Path(self.source)
        self.text = path.read_text("utf-8")
        ht = parse(self.text, self.params(), rewrite_budget=self.budget)
        log.info("Loaded %s from %s", ht.name, path)
        return ht

    def report(self, command: str, ht: HopfTower) -> Report:
        return Report(command=command, algebra=ht.name, input_digest=digest_text(self.text))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check(session: Session) -> Report:
    ht = session.load()
    report = session.report("check", ht)
    report.add_checks(validate_tower(ht.tower).checks)
    report.add_checks(check_hopf_axioms(ht).checks)
    notes: list[str] = []
    for i in range(2, ht.arity + 1):
        hoe = check_hoe_conditions(ht, i)
        report.add_checks(hoe.checks)
        notes.extend(hoe.notes)
    basis = primitives(ht, session.config.default_max_deg) if ht.arity else []
    if ht.arity:
        report.add_checks([primitive_dimension_bounds(ht, session.config.default_max_deg, basis)])
    report.results["gk_dimension"] = str(gk_dimension(ht))
    report.results["gk_basis"] = GK_BASIS
    report.results["primitives"] = [ht.render(p) for p in basis]
    report.results["characters_of_sigma"] = notes
    return report


def cmd_nf(session: Session) -> Report:
    ht = session.load()
    report = session.report("nf", ht)
    report.results["normal_form"] = ht.render(parse_expression(session.args.expr, ht))
    return report


def cmd_primitives(session: Session) -> Report:
    ht = session.load()
    max_deg = session.args.max_deg or session.config.default_max_deg
    report = session.report("primitives", ht)
    basis = primitives(ht, max_deg)
    report.results["max_deg"] = str(max_deg)
    report.results["dimension"] = str(len(basis))
    report.results["basis"] = [ht.render(p) for p in basis]
    report.add_checks([primitive_dimension_bounds(ht, max_deg, basis)])
    return report


def cmd_antipode(session: Session) -> Report:
    ht = session.load()
    power = session.args.power
    report = session.report("antipode", ht)
    if session.args.expr:
        targets = [(session.args.expr, parse_expression(session.args.expr, ht))]
    else:
        targets = [(name, ht.tower.generator(name)) for name in ht.names]
    report.results["power"] = str(power)
    report.results["images"] = [
        f"S^{power}({label}) = {ht.render(antipode_power(p, power, ht))}" for label, p in targets
    ]
    return report


def cmd_antipode_order(session: Session) -> Report:
    ht = session.load()
    max_m = session.args.max_m or session.config.default_max_m
    order = antipode_order(ht, max_m)
    report = session.report("antipode-order", ht)
    report.results["verdict"] = order.verdict.value
    report.results["detail"] = order.detail
    if order.generator is not None:
        report.results["generator"] = order.generator
    status = Status.UNRESOLVED if order.verdict is OrderVerdict.UNDECIDED else Status.PASS
    report.add_checks([CheckResult(
        name="antipode.order", status=status,
        basis="either S^2 = Id or S has infinite order",
        witness=order.detail if status is Status.UNRESOLVED else None,
    )])
    return report


def cmd_characters(session: Session) -> Report:
    ht = session.load()
    variety = character_variety(ht)
    report = session.report("characters", ht)
    report.results["variety"] = variety.describe()
    report.results["note"] = CLOSURE_NOTE
    status = Status.PASS if variety.resolved else Status.UNRESOLVED
    report.add_checks([CheckResult(
        name="characters.solved", status=status,
        basis="rational characters by triangular substitution",
        witness=None if variety.resolved else "; ".join(str(e) for e in variety.solution.residual),
    )])
    return report


def cmd_classify(session: Session) -> Report:
    ht = session.load()
    result = classify_extension(ht, session.args.step)
    report = session.report("classify", ht)
    report.results["type"] = result.kind.value
    report.results["reasons"] = result.reasons
    consistent = result.kind is not ExtensionType.INCONSISTENT
    report.add_checks([CheckResult(
        name=f"classify.consistency[{ht.names[session.args.step - 1]}]",
        status=Status.PASS if consistent else Status.FAIL,
        basis="a Hopf Ore extension step is invariant or variant at the counit",
        witness=None if consistent else "; ".join(result.reasons),
    )])
    return report


def _assignment(raw: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in filter(None, (part.strip() for part in raw.split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise CharacterError(f"--at expects g=value pairs, got {item!r}")
        out[name.strip()] = value.strip()
    return out


def cmd_fiber(session: Session) -> Report:
    ht = session.load()
    i = session.args.step
    k = ht.tower.check_step(i, lowest=2)
    assignment = _assignment(session.args.at or "")
    earlier = ht.names[:k]
    unknown = sorted(set(assignment) - set(ht.names))
    if unknown:
        raise UnknownGeneratorError(f"no generator named {', '.join(unknown)}")
    extra = sorted(set(assignment) - set(earlier))
    if extra:
        raise CharacterError(f"step {i} takes values only for {', '.join(earlier)}, not {', '.join(extra)}")
    missing = [n for n in earlier if n not in assignment]
    if missing:
        raise CharacterError(f"no value assigned to {', '.join(missing)}")
    try:
        values = [to_scalar(assignment[n]) for n in earlier]
    except (ValueError, ZeroDivisionError):
        raise CharacterError(f"--at values must be rationals, got {session.args.at!r}") from None
    result = goodearl_fiber(ht, i, values)
    report = session.report("fiber", ht)
    report.results["kind"] = result.kind.value
    report.results["description"] = result.description
    report.results["diagnostics"] = result.diagnostics
    status = Status.UNRESOLVED if result.kind is FiberKind.UNRESOLVED else Status.PASS
    report.add_checks([CheckResult(
        name=f"fiber.decided[{ht.names[k]}]", status=status,
        basis=FIBER_BASIS,
        witness="; ".join(result.diagnostics) if status is Status.UNRESOLVED else None,
    )])
    return report


def cmd_s4(session: Session) -> Report:
    ht = session.load()
    decomposition = s4_decompose(ht)
    report = session.report("s4", ht)
    report.results["diagnostics"] = decomposition.diagnostics
    if not decomposition.resolved:
        report.add_checks([CheckResult(
            name="s4.decomposition", status=Status.UNRESOLVED,
            basis="S^4 = tau_left(chi) o tau_right(chi o S)",
            witness="; ".join(decomposition.diagnostics[-1:]),
        )])
        return report
    chi = Character.from_values(ht, decomposition.character)
    report.results["character"] = chi.render()
    report.add_checks(check_s4_windings(ht, chi).checks)
    return report


def cmd_normality(session: Session) -> Report:
    ht = session.load()
    names = [g.strip() for g in (session.args.gens or "").split(",") if g.strip()]
    max_deg = session.args.max_deg if session.args.max_deg is not None else session.config.default_max_deg
    result = normality_search(ht, names, max_deg)
    report = session.report("normality", ht)
    report.results["verdict"] = result.verdict.value
    report.results["tests_run"] = str(result.tests_run)
    report.results["hopf_ideal"] = "yes" if result.hopf_ideal else "no"
    report.results["hopf_ideal_detail"] = result.hopf_ideal_detail
    if result.witness:
        report.results["witness"] = result.witness
        report.results["failed_test"] = result.failed_test
    return report


def cmd_properties(session: Session) -> Report:
    ht = session.load()
    samples = session.args.samples or session.config.property_samples
    suite = run_properties(ht, samples, session.seed)
    report = session.report("properties", ht)
    report.results["seed"] = str(session.seed)
    report.results["samples"] = str(samples)
    report.add_checks(suite.checks)
    return report


def cmd_examples(session: Session) -> Report | None:
    if session.args.emit:
        sys.stdout.write(serialize(builtin(session.args.emit, rewrite_budget=session.budget)))
        return None
    report = Report(command="examples", algebra="", input_digest=digest_text(""))
    report.results["builtins"] = list(BUILTIN_NAMES)
    return report


COMMANDS: dict[str, Callable[[Session], Report | None]] = {
    "check": cmd_check,
    "nf": cmd_nf,
    "primitives": cmd_primitives,
    "antipode": cmd_antipode,
    "antipode-order": cmd_antipode_order,
    "characters": cmd_characters,
    "classify": cmd_classify,
    "fiber": cmd_fiber,
    "s4": cmd_s4,
    "normality": cmd_normality,
    "properties": cmd_properties,
    "examples": cmd_examples,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit the report as JSON")
    common.add_argument("--seed", type=int, help="Seed for randomized property checks")
    common.add_argument("--rewrite-budget", dest="rewrite_budget", type=int, help="Rewrite step budget per operation")
    common.add_argument("--param", action="append", metavar="NAME=VALUE", help="Bind a presentation parameter")
    common.add_argument("--config", type=Path, help="Configuration file (default config/workbench.json)")
    common.add_argument("--debug", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(prog="hopfore", description="Exact workbench for iterated Hopf Ore extensions")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, with_file: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        if with_file:
            p.add_argument("file", help="A .hopf file or builtin:NAME")
        return p

    add("check", "Validate the tower and verify every Hopf and Hopf Ore identity")
    add("nf", "Normal form of an expression").add_argument("expr")
    add("primitives", "Primitive elements up to a degree bound").add_argument("--max-deg", dest="max_deg", type=int)
    p = add("antipode", "Powers of the antipode")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("expr", nargs="?")
    add("antipode-order", "S^2 = Id or infinite order").add_argument("--max-m", dest="max_m", type=int)
    add("characters", "Rational characters of the algebra")
    add("classify", "Invariant or variant type of a step").add_argument("--step", type=int, required=True)
    p = add("fiber", "Characters extending a character of the coefficient algebra")
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--at", default="", help='Values of the earlier generators, "g=val,..."')
    add("s4", "Decompose S^4 into winding automorphisms")
    p = add("normality", "Bounded normality search for an ideal")
    p.add_argument("--gens", required=True, help='Ideal generators, "a,b"')
    p.add_argument("--max-deg", dest="max_deg", type=int)
    add("properties", "Randomized property suite").add_argument("--samples", type=int)
    add("examples", "List builtins or print one as a presentation", with_file=False).add_argument(
        "--emit", metavar="NAME", help="Print builtin NAME in the .hopf format"
    )
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _configure_logging("DEBUG" if args.debug else config.log_level)
    session = Session(args, config)

    try:
        report = COMMANDS[args.command](session)
    except PresentationError as exc:
        where = f"{session.source}:" if exc.line is not None else f"{session.source}: "
        print(f"ERROR: {where}{exc}", file=sys.stderr)
        return EXIT_INPUT
    except RewriteBudgetExceeded as exc:
        log.warning("Rewrite budget exhausted: %s", exc)
        report = Report(command=args.command, algebra=session.source, input_digest=digest_text(session.text))
        report.add_checks([CheckResult(
            name="engine.rewrite-budget", status=Status.UNRESOLVED,
            basis="rewriting finished within the step budget", witness=str(exc),
        )])
        _emit(report, args.json)
        return EXIT_UNRESOLVED
    except (WorkbenchError, OSError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RecursionError, MemoryError) as exc:
        log.debug("%s ran out of resources", args.command, exc_info=True)
        print(f"ERROR: {args.command} ran out of resources: {type(exc).__name__}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        log.error("%s failed unexpectedly: %s", args.command, exc, exc_info=True)
        print(f"ERROR: internal failure in {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if report is None:
        return 0
    _emit(report, args.json)
    log.info("%s finished: %s", args.command, report.status.value)
    return report.exit_code()


def _emit(report: Report, as_json: bool) -> None:
    print(report.to_json() if as_json else report.to_text())
