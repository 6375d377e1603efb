"""Command-line surface: configuration, commands and result tables."""

from __future__ import annotations

__all__ = (
    "COMMANDS",
    "SCHEMAS",
    "RunConfig",
    "emit_csv",
    "load_config",
    "main",
    "parse_config",
    "reference_config",
    "run_command",
)

from winoc.cli._commands import COMMANDS, main, run_command
from winoc.cli._config import (
    RunConfig,
    load_config,
    parse_config,
    reference_config,
)
from winoc.cli._output import SCHEMAS, emit_csv
