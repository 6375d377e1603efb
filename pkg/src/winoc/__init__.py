"""The initialization file for the winoc package."""

from __future__ import annotations

__all__ = ("__version__", "cli", "model", "oracle")

from winoc import cli, model, oracle
from winoc.__metadata__ import __version__
