"""Exact symbolic workbench for iterated Hopf Ore extensions over the rationals."""

from .builtins import BUILTIN_NAMES, builtin
from .dsl import parse, parse_expression, serialize
from .errors import PresentationError, WorkbenchError
from .hopf import HopfTower, antipode, coproduct, counit
from .ore_core import NcPoly, Step, Tower, normal_form
from .report import TOOL_VERSION as __version__
from .tensor import Tensor2, Tensor3

__all__ = [
    "BUILTIN_NAMES",
    "HopfTower",
    "NcPoly",
    "PresentationError",
    "Step",
    "Tensor2",
    "Tensor3",
    "Tower",
    "WorkbenchError",
    "antipode",
    "builtin",
    "coproduct",
    "counit",
    "normal_form",
    "parse",
    "parse_expression",
    "serialize",
]
