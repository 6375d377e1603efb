"""Winoc metadata file."""

from __future__ import annotations

__version__ = "2026.10.18+t000000"
