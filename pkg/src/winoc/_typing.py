"""Type hints."""

from __future__ import annotations

__all__ = (
    "ClassKey",
    "Command",
    "OutputFormat",
    "SweepVariable",
)

from typing import Literal

# path classes
type ClassKey = tuple[int, int]

# CLI-related
type Command = Literal[
    "gain",
    "compare-models",
    "approx-error",
    "sweep",
    "complexity",
    "oracle-check",
]
type OutputFormat = Literal["csv", "tsv"]
type SweepVariable = Literal["J", "d", "J_bound", "r"]
