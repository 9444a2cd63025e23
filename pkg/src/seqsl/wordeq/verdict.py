"""Solver outcomes."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Sat:
    witness: dict = field(default_factory=dict)

    status = "sat"


@dataclass(frozen=True)
class Unsat:
    status = "unsat"


@dataclass(frozen=True)
class Unknown:
    reason: str = ""
    bound: object = None

    status = "unknown"
