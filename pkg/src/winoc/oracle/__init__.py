"""Ground truth for the path counts by exhaustive enumeration."""

from __future__ import annotations

__all__ = (
    "CountComparison",
    "OracleCaps",
    "OracleReport",
    "check_counts",
    "enumerate_paths",
    "oracle_total_gain",
    "sequence_gain",
)

from winoc.oracle._enumerate import (
    CountComparison,
    OracleCaps,
    OracleReport,
    check_counts,
    enumerate_paths,
    oracle_total_gain,
    sequence_gain,
)
