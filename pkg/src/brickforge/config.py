"""Global enumeration budget."""

import os

DEFAULT_BUDGET = 10**4


def get_budget() -> int:
    raw = os.environ.get("BRICKFORGE_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"BRICKFORGE_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("BRICKFORGE_BUDGET must be positive")
    return value
