"""CSV and TSV result tables.

Every command writes rows of one fixed schema. Floats are written in
scientific notation with 17 significant digits; integers that may
outgrow 64 bits (path counts, loop counts) are written as decimal
strings. A missing ``J_bound`` is an empty field.
"""

from __future__ import annotations

__all__ = ("SCHEMAS", "Column", "emit_csv", "schema_help")

import sys
from types import MappingProxyType
from typing import TYPE_CHECKING, NamedTuple

import jinja2
import polars as pl

from winoc._errors import WinocError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping
    from pathlib import Path
    from typing import Any

    from polars.datatypes import DataTypeClass

    from winoc._typing import OutputFormat


class Column(NamedTuple):
    """One column of a result schema.

    Attributes:
        name: Header of the column.
        dtype: Polars data type the column is written with.
        doc: One-line description for the help text.
    """

    name: str
    dtype: DataTypeClass
    doc: str


_CONFIG_COLUMNS = (
    Column("J", pl.Int64, "layers between transmitter and receiver"),
    Column("J_bound", pl.Int64, "boundary distance, empty if none"),
    Column("d", pl.Float64, "transmitter-receiver displacement (m)"),
    Column("r", pl.Int64, "number of launch-angle samples"),
)

SCHEMAS: Mapping[str, tuple[Column, ...]] = MappingProxyType({
    "gain": (
        *_CONFIG_COLUMNS,
        Column("model", pl.String, "model that produced the row"),
        Column("theta_bound", pl.Float64, "launch-angle bound (rad)"),
        Column("h_linear", pl.Float64, "total channel gain"),
        Column("h_db", pl.Float64, "total channel gain (dB)"),
        Column("loops_executed", pl.Int64, "inner-loop iterations"),
    ),
    "gain-angle": (
        *_CONFIG_COLUMNS,
        Column("model", pl.String, "model that produced the row"),
        Column("theta", pl.Float64, "launch angle (rad)"),
        Column("h_theta", pl.Float64, "weighted partial gain"),
        Column("classes", pl.Int64, "classes evaluated at the angle"),
    ),
    "gain-class": (
        *_CONFIG_COLUMNS,
        Column("model", pl.String, "model that produced the row"),
        Column("theta", pl.Float64, "launch angle (rad)"),
        Column("n", pl.Int64, "refraction count"),
        Column("m", pl.Int64, "reflection count"),
        Column("count", pl.String, "received paths of the class"),
        Column("gain", pl.Float64, "class gain"),
        Column("contribution", pl.Float64, "weighted class gain"),
    ),
    "compare-models": (
        *_CONFIG_COLUMNS,
        Column("h_bl", pl.Float64, "boundary-less gain"),
        Column("h_bc", pl.Float64, "boundary-constrained gain"),
        Column("difference", pl.Float64, "h_bl - h_bc"),
        Column("relative_difference", pl.Float64, "|h_bl - h_bc| / h_bl"),
        Column("h_bl_db", pl.Float64, "boundary-less gain (dB)"),
        Column("h_bc_db", pl.Float64, "boundary-constrained gain (dB)"),
    ),
    "approx-error": (
        *_CONFIG_COLUMNS,
        Column("h_full", pl.Float64, "full-model gain"),
        Column("h_approx", pl.Float64, "approximate gain"),
        Column("gap_db", pl.Float64, "h_full in dB minus h_approx in dB"),
        Column("relative_error", pl.Float64, "(h_full - h_approx) / h_full"),
        Column("dropped", pl.Float64, "gain of the dropped classes"),
        Column("theta_t", pl.Float64, "coherence cutoff angle (rad)"),
    ),
    "complexity": (
        *_CONFIG_COLUMNS,
        Column("loop_bl", pl.String, "boundary-less loop count"),
        Column("loop_bc", pl.String, "boundary-constrained loop count"),
        Column("empirical_difference", pl.String, "loop_bc - loop_bl"),
        Column("predicted_difference", pl.Float64, "closed-form estimate"),
        Column(
            "relative_gap",
            pl.Float64,
            "(predicted - empirical) / |empirical|, empty if 0",
        ),
        Column("negative_terms", pl.Int64, "classes with 2n < J_bound"),
    ),
    "oracle-check": (
        Column("J", pl.Int64, "layers between transmitter and receiver"),
        Column("J_bound", pl.Int64, "boundary distance, empty if none"),
        Column("theta", pl.Float64, "launch angle (rad)"),
        Column("n", pl.Int64, "refraction count"),
        Column("m", pl.Int64, "reflection count"),
        Column("counted", pl.String, "effective count by counting"),
        Column("enumerated", pl.String, "effective count by enumeration"),
    ),
})

_HELP_TEMPLATE = """\
output schemas (one header row, then data rows):
{% for name, columns in schemas.items() %}
  {{ name }}
{% for col in columns %}
    {{ "%-22s"|format(col.name) }}{{ col.doc }}
{% endfor %}
{% endfor %}
"""


def schema_help() -> str:
    """Render the description of every schema for ``--help``."""
    env = jinja2.Environment(  # noqa: S701
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    return env.from_string(_HELP_TEMPLATE).render(schemas=SCHEMAS)


def _frame(rows: Iterable[Mapping[str, Any]], schema: str) -> pl.DataFrame:
    columns = SCHEMAS[schema]
    data: dict[str, list[Any]] = {col.name: [] for col in columns}
    for row in rows:
        for col in columns:
            value = row[col.name]
            if value is not None:
                if col.dtype == pl.String:
                    value = str(value)
                elif col.dtype == pl.Float64:
                    value = float(value)
            data[col.name].append(value)
    return pl.DataFrame(
        data,
        schema={col.name: col.dtype for col in columns},
        strict=True,
    )


def emit_csv(
    rows: Iterable[Mapping[str, Any]],
    schema: str,
    path: Path | None = None,
    fmt: OutputFormat = "csv",
) -> pl.DataFrame:
    """Write rows as a delimited text table.

    Args:
        rows: Rows keyed by column name, already in output order.
        schema: Name of the schema in `SCHEMAS`.
        path: Output file; None writes to standard output.
        fmt: ``"csv"`` for commas, ``"tsv"`` for tabs.

    Returns:
        The table that was written.

    Raises:
        WinocError: If the file cannot be written.
    """
    df = _frame(rows, schema)
    options = {
        "separator": "\t" if fmt == "tsv" else ",",
        "float_scientific": True,
        "float_precision": 16,
        "line_terminator": "\n",
    }
    if path is None:
        sys.stdout.write(df.write_csv(**options))
        return df
    try:
        df.write_csv(path, **options)
    except OSError as exc:
        msg = f"cannot write {path}: {exc.strerror}"
        raise WinocError(msg) from exc
    return df
