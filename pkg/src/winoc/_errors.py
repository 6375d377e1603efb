"""Exceptions raised by winoc.

Every exception carries the process exit code the command-line surface
reports for it.
"""

from __future__ import annotations

__all__ = (
    "CapExceededError",
    "ComputationError",
    "ConfigParseError",
    "DegenerateAngleError",
    "DegenerateRatioError",
    "NoSolutionError",
    "OracleMismatchError",
    "ValidationError",
    "WinocError",
)

from typing import ClassVar


class WinocError(Exception):
    """Base class of all winoc errors."""

    exit_code: ClassVar[int] = 2


class ValidationError(WinocError, ValueError):
    """An input value violates a documented constraint.

    Attributes:
        key: Dotted key path of the offending value, e.g. 'geometry.r'.
        constraint: Human-readable constraint that was violated.
    """

    exit_code: ClassVar[int] = 1

    def __init__(self, key: str, constraint: str) -> None:
        """Initialize a new instance.

        Args:
            key: Dotted key path of the offending value.
            constraint: The violated constraint, e.g. 'r >= 1'.
        """
        super().__init__(f"{key}: {constraint}")
        self.key = key
        self.constraint = constraint


class ConfigParseError(WinocError):
    """A configuration document is not well-formed."""

    exit_code: ClassVar[int] = 1

    def __init__(self, message: str, line: int, column: int) -> None:
        """Initialize a new instance.

        Args:
            message: Parser message.
            line: 1-based line of the error.
            column: 1-based column of the error.
        """
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ComputationError(WinocError):
    """A numerical step could not be carried out."""


class NoSolutionError(ComputationError):
    """The launch-angle bound has no solution for the geometry."""


class DegenerateAngleError(ComputationError):
    """A step displacement vanishes at the requested angle."""


class DegenerateRatioError(ComputationError):
    """The reflection factor in a gain ratio vanishes."""


class CapExceededError(ComputationError):
    """Exhaustive enumeration was asked to exceed its size guard."""


class OracleMismatchError(WinocError):
    """Counting results disagree with exhaustive enumeration.

    Attributes:
        theta: Launch angle of the minimal failing class.
        n: Refraction count of the minimal failing class.
        m: Reflection count of the minimal failing class.
        j_bound: Boundary distance, None for the boundary-less model.
    """

    exit_code: ClassVar[int] = 3

    def __init__(
        self,
        theta: float,
        n: int,
        m: int,
        j_bound: int | None,
    ) -> None:
        """Initialize a new instance.

        Args:
            theta: Launch angle in radians.
            n: Refraction count.
            m: Reflection count.
            j_bound: Boundary distance, None when boundary-less.
        """
        super().__init__(
            f"count mismatch at theta={theta!r}, n={n}, m={m}, "
            f"J_bound={'inf' if j_bound is None else j_bound}",
        )
        self.theta = theta
        self.n = n
        self.m = m
        self.j_bound = j_bound
