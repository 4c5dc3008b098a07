"""Runtime defaults read from the environment."""
from __future__ import annotations

import os

ENUM_CAP_ENV = "INTERLEAVEKIT_ENUM_CAP"
CI_BUDGET_ENV = "INTERLEAVEKIT_CI_BUDGET"

DEFAULT_ENUM_CAP = 1 << 24
DEFAULT_CI_BUDGET = 1 << 20


def _read(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if not raw:
        return default
    value = int(raw)
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def enumeration_cap() -> int:
    """Largest number of candidates an exhaustive interleaving search may visit."""
    return _read(ENUM_CAP_ENV, DEFAULT_ENUM_CAP)


def ci_budget() -> int:
    """Largest number of matrices the CI brute-force solver may visit."""
    return _read(CI_BUDGET_ENV, DEFAULT_CI_BUDGET)
