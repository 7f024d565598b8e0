#!/usr/bin/env python3
"""
Presentation Generator

Writes every builtin algebra and the mutated regression examples to
assets/presentations/ as .hopf files, and lists them in
assets/presentations/manifest.json.

Usage:
    python3 tools/generate_presentations.py

Run this script whenever a builtin or a mutation changes. run_checks.sh
expects exit 0 from `check` on every file except the *-mutated* ones, which
must exit 1.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from hopfore.builtins import builtin  # noqa: E402
from hopfore.dsl import serialize  # noqa: E402
from hopfore.hopf import HopfTower  # noqa: E402
from hopfore.ore_core import NcPoly, Step, Tower  # noqa: E402
from hopfore.tensor import Tensor2  # noqa: E402

OUTPUT_DIR = ROOT / "assets" / "presentations"

BUILTINS = [
    "k",
    "heisenberg",
    "solv2-der",
    "solv2-auto",
    "usl2",
    "A(0,0,0)",
    "A(0,0,1)",
    "A(1,1,1)",
    "A(1,1,0)",
    "B(0)",
    "B(1)",
    "B(1/2)",
]


def slug(name):
    """File stem for a builtin name: A(0,0,1) -> A_0_0_1, B(1/2) -> B_1-2"""
    return name.replace("(", "_").replace(")", "").replace(",", "_").replace("/", "-")


def _last_step(ht, **images):
    tower = ht.tower
    steps = list(tower.steps)
    steps[-1] = Step(
        sigma=images.get("sigma", steps[-1].sigma),
        sigma_inv=images.get("sigma_inv", steps[-1].sigma_inv),
        delta=images.get("delta", steps[-1].delta),
    )
    return ht.replace(tower=Tower(tower.names, steps, rewrite_budget=tower.rewrite_budget))


def corrupt_tail(ht):
    """Add (first generator) (x) 1 to the last tail."""
    n = ht.arity
    tails = list(ht.tails)
    tails[-1] = tails[-1] + Tensor2.outer(NcPoly.generator(n, 0), NcPoly.one(n))
    return ht.replace(tails=tails)


def counit_tail(ht):
    """Add 1 (x) (first generator) to the last tail, breaking the counit axiom."""
    n = ht.arity
    tails = list(ht.tails)
    tails[-1] = tails[-1] + Tensor2.outer(NcPoly.one(n), NcPoly.generator(n, 0))
    return ht.replace(tails=tails)


def shift_sigma(ht):
    """sigma_n(x_1) += 1 and sigma_n^-1(x_1) -= 1."""
    one = NcPoly.one(ht.arity)
    step = ht.tower.steps[-1]
    sigma = list(step.sigma)
    sigma_inv = list(step.sigma_inv)
    sigma[0] = sigma[0] + one
    sigma_inv[0] = sigma_inv[0] - one
    return _last_step(ht, sigma=tuple(sigma), sigma_inv=tuple(sigma_inv))


def perturb_delta(ht):
    """delta_n(x_1) += x_1^2."""
    step = ht.tower.steps[-1]
    x = ht.tower.generator(0)
    delta = list(step.delta)
    delta[0] = delta[0] + ht.tower.mul(x, x)
    return _last_step(ht, delta=tuple(delta))


MUTATIONS = [
    ("heisenberg-mutated", "heisenberg", counit_tail, "tail y ox z + 1 ox y breaks the counit axiom"),
    ("A_0_0_1-mutated-tail", "A(0,0,1)", corrupt_tail, "tail gains Y ox 1"),
    ("usl2-mutated-delta", "usl2", perturb_delta, "delta_f(h) = h^2 is not a sigma-derivation"),
    ("B_1-mutated-sigma", "B(1)", shift_sigma, "sigma_Z(Y) = Y + 1 is not an algebra map"),
]


def generate_presentations():
    """Write the .hopf files and the manifest"""
    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    entries = []

    for name in BUILTINS:
        filename = f"{slug(name)}.hopf"
        (OUTPUT_DIR / filename).write_text(serialize(builtin(name)), encoding="utf-8")
        entries.append({
            "filename": filename,
            "source": f"builtin:{name}",
            "expected_exit": 0,
            "description": f"builtin {name}",
        })

    for stem, name, mutate, description in MUTATIONS:
        filename = f"{stem}.hopf"
        mutated = mutate(builtin(name)).replace(name=stem)
        (OUTPUT_DIR / filename).write_text(serialize(mutated), encoding="utf-8")
        entries.append({
            "filename": filename,
            "source": f"builtin:{name}",
            "expected_exit": 1,
            "description": description,
        })

    entries.sort(key=lambda e: e["filename"])
    manifest = {"generated": "auto", "version": "1.0", "presentations": entries}
    output_path = OUTPUT_DIR / "manifest.json"
    with open(output_path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")

    print(f"✓ Generated {len(entries)} presentations")
    print(f"✓ Manifest saved to: {output_path}")


if __name__ == "__main__":
    try:
        generate_presentations()
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(1)
