"""
Utility helpers for the Sklyanin verifier.

Provides constants, validation, environment parsing, domain errors and
formatting functions. Pure helpers, no I/O.
"""

import os
from math import comb
from pathlib import Path
from typing import Any

import pandas as pd

# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

DEFAULT_PRIMES = (7, 11)
DEFAULT_SEED = 0
SYMBOLIC_CUTOFF = 4
FINITE_CUTOFF = 7
SEQUENCE_CUTOFF = 6
MAX_FIELD_SIZE = 841
MAX_RESAMPLE = 8
ENV_PREFIX = "SKLY_"

OUTPUT_DIR = Path(__file__).resolve().parent / "output"

VALID_MODES = {"symbolic", "specialized"}
VALID_SUITES = {"identities", "modules", "schemes", "incidence", "sequences", "all"}
SUITE_ORDER = ("identities", "modules", "schemes", "incidence", "sequences")
ENUMERATION_SUITES = {"schemes", "incidence", "sequences"}

GENERATORS_S = ("x0", "x1", "x2", "x3")
GENERATORS_A = ("y0", "y1", "y2", "y3")
PLUCKER_NAMES = ("z01", "z02", "z03", "z12", "z13", "z23")
PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
LINE_FAMILIES = ("C0", "C1", "C2", "C3", "E1", "E2", "E3")
POINT_FAMILIES = ("Pinf", "P0", "P1", "P2", "P3")

# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class CutoffExceeded(ValueError):
    """A graded computation was requested beyond the configured degree cutoff."""


class ExhaustedSearch(RuntimeError):
    """No admissible parameter tuple exists for the requested prime."""


class DegenerateSpecialization(RuntimeError):
    """The specialization violates a genericity assumption; re-sample."""


class DegenerateConfiguration(ValueError):
    """A geometric construction hit a coincidence it cannot resolve."""


class ComputationLimit(RuntimeError):
    """A symbolic computation was refused by a size guard."""

# ---------------------------------------------------------------------------
# Validation helpers
# ---------------------------------------------------------------------------

def validate_positive(value: int, name: str = "value") -> int:
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value

def validate_non_negative(value: int, name: str = "value") -> int:
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value

def validate_in(value: Any, allowed: set, name: str = "value") -> Any:
    if value not in allowed:
        raise ValueError(f"{name} must be one of {sorted(allowed)}, got {value!r}")
    return value

def validate_range(value: int, low: int, high: int, name: str = "value") -> int:
    if not low <= value <= high:
        raise ValueError(f"{name} must be between {low} and {high}, got {value}")
    return value

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True

def validate_prime(p: int, name: str = "prime") -> int:
    if not is_prime(p) or p == 2:
        raise ValueError(f"{name} must be an odd prime, got {p!r}")
    if p * p > MAX_FIELD_SIZE:
        raise ValueError(f"{name} must satisfy p^2 <= {MAX_FIELD_SIZE}, got {p}")
    return p

# ---------------------------------------------------------------------------
# Environment / parsing helpers
# ---------------------------------------------------------------------------

def env_value(key: str, default: Any = None) -> str | None:
    """Read SKLY_<KEY> from the environment."""
    raw = os.environ.get(ENV_PREFIX + key.upper())
    if raw is None or raw.strip() == "":
        return default
    return raw.strip()

def env_int(key: str, default: int | None = None) -> int | None:
    raw = env_value(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}{key.upper()} must be an integer, got {raw!r}") from None

def parse_primes(text: str) -> tuple[int, ...]:
    """Parse '13,17' into (13, 17)."""
    parts = [t.strip() for t in str(text).split(",") if t.strip()]
    if not parts:
        raise ValueError(f"primes must be a comma separated list, got {text!r}")
    try:
        return tuple(int(t) for t in parts)
    except ValueError:
        raise ValueError(f"primes must be integers, got {text!r}") from None

# ---------------------------------------------------------------------------
# Combinatorics
# ---------------------------------------------------------------------------

def hilbert_dim(n: int) -> int:
    """dim of degree n of a polynomial-like algebra on four generators."""
    return comb(n + 3, 3)

def xor_label(i: int, j: int) -> int:
    return i ^ j

# ---------------------------------------------------------------------------
# Formatting helpers
# ---------------------------------------------------------------------------

def fmt_ms(seconds: float) -> str:
    return f"{seconds * 1000:.1f} ms"

def fmt_tuple(F, values) -> str:
    return "(" + ", ".join(F.to_str(v) for v in values) + ")"

def fmt_verdict(passed: bool) -> str:
    return "PASS" if passed else "FAIL"

def frame_to_markdown(df: pd.DataFrame, index: bool = False) -> str:
    """Render a DataFrame as a GitHub table without optional deps."""
    frame = df.reset_index() if index else df
    headers = [str(c) for c in frame.columns]
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in frame.itertuples(index=False):
        lines.append("| " + " | ".join(str(v) for v in row) + " |")
    return "\n".join(lines)
