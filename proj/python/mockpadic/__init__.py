"""Exact q-expansions, cohomology representatives and p-adic delta
approximants for the weight-4 CM form eta(3t)^8 on Gamma_0(9)."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import _core
from ._core import (
    CertificationError,
    HardFailure,
    InvalidInput,
    Obstruction,
    PrecisionError,
    ResourceExhausted,
)

__version__ = _core.__version__

__all__ = [
    "CertificationError",
    "HardFailure",
    "InvalidInput",
    "Obstruction",
    "PrecisionError",
    "ResourceExhausted",
    "coefficients",
    "delta",
    "expand",
    "representative",
    "run",
    "suite",
    "suite_names",
]


def expand(name: str, prec: int = 20, level: int = 9) -> dict:
    """q-expansion of a catalog form, an Eisenstein series or eta tokens
    such as ``"3:8"``. Terms are ``(exponent, Fraction)`` pairs."""
    out = json.loads(_core.expand_json(name, prec, level))
    out["terms"] = [(n, Fraction(c)) for n, c in out["terms"]]
    return out


def coefficients(name: str, prec: int = 20, level: int = 9) -> Dict[int, Fraction]:
    """Nonzero coefficients of ``expand(name)`` keyed by exponent."""
    return dict(expand(name, prec, level)["terms"])


def representative(pole_order: int, prec: int = 0) -> dict:
    """Cohomology representative Phi_m with <Phi_m, g> = 1."""
    return json.loads(_core.representative_json(pole_order, prec))


def delta(
    p: int,
    m_max: int = 0,
    M: int = 6,
    route: str = "auto",
    poles: Sequence[int] = (1, 2),
    guard: int = -1,
) -> List[dict]:
    """Approximant reports at an inert prime p, one per representative."""
    return json.loads(_core.delta_json(p, m_max, M, route, list(poles), guard))


def suite(name: str, trials: int = 100, oracle_prec: int = 2000) -> dict:
    return json.loads(_core.suite_json(name, trials, oracle_prec))


def suite_names() -> List[str]:
    return list(_core.suite_names())


def run(args: Sequence[str]) -> Tuple[int, str, str]:
    """Runs the command line tool in-process."""
    return _core.run(list(args))
