"""Run configuration files.

A configuration is a TOML document with the sections ``[stack]``,
``[geometry]``, ``[approx]``, ``[sweep]``, ``[output]`` and
``[oracle]``. Physical quantities are SI units throughout.
"""

from __future__ import annotations

__all__ = (
    "OracleSpec",
    "OutputSpec",
    "RunConfig",
    "SweepSpec",
    "load_config",
    "parse_config",
    "reference_config",
    "with_overrides",
)

import math
import re
import tomllib
from dataclasses import dataclass, replace
from importlib.resources import files
from pathlib import Path
from types import MappingProxyType
from typing import TYPE_CHECKING, Any, NamedTuple, get_args

from winoc._errors import ConfigParseError, ValidationError, WinocError
from winoc._typing import OutputFormat, SweepVariable
from winoc.model import ApproxConfig, Geometry, StackSpec
from winoc.oracle import OracleCaps

if TYPE_CHECKING:
    from collections.abc import Mapping
    from os import PathLike

# section -> key -> (expected type, required)
_KEYS: Mapping[str, Mapping[str, tuple[str, bool]]] = MappingProxyType({
    "stack": MappingProxyType({
        "l1": ("float", True),
        "l2": ("float", True),
        "l3": ("float", True),
        "n1": ("float", True),
        "n2": ("float", True),
        "n3": ("float", True),
        "lam1": ("float", True),
        "lam2": ("float", True),
        "lam3": ("float", True),
        "frequency": ("float", False),
    }),
    "geometry": MappingProxyType({
        "J": ("int", True),
        "J_bound": ("int", False),
        "d": ("float", True),
        "L": ("float", True),
        "g_t": ("float", False),
        "g_r": ("float", False),
        "r": ("int", False),
        "q": ("int", False),
        "theta_bound": ("float", False),
    }),
    "approx": MappingProxyType({
        "t_c": ("float", True),
        "v": ("float", False),
        "refraction_truncation": ("bool", False),
        "coherence_cutoff": ("bool", False),
    }),
    "sweep": MappingProxyType({
        "variable": ("str", True),
        "values": ("list", True),
    }),
    "output": MappingProxyType({
        "path": ("str", False),
        "format": ("str", False),
    }),
    "oracle": MappingProxyType({
        "J": ("list", False),
        "j_bounds": ("list", False),
        "boundary_less": ("bool", False),
        "n_max": ("int", False),
        "m_max": ("int", False),
        "samples": ("int", False),
    }),
})
_REQUIRED_SECTIONS = ("stack", "geometry")
_GEOMETRY_FIELDS = MappingProxyType({
    "J": "j",
    "J_bound": "j_bound",
    "L": "length",
})
_TOML_POSITION = re.compile(r"\(at line (\d+), column (\d+)\)")


class SweepSpec(NamedTuple):
    """A single sweep axis.

    Attributes:
        variable: The geometry value being swept.
        values: The values in sweep order.
    """

    variable: SweepVariable
    values: tuple[float, ...] | tuple[int, ...]


class OutputSpec(NamedTuple):
    """Where and how results are written.

    Attributes:
        path: Output file, or None for standard output.
        format: Field-separated text format.
    """

    path: Path | None = None
    format: OutputFormat = "csv"


class OracleSpec(NamedTuple):
    """The count-equivalence matrix checked by oracle-check.

    Attributes:
        js: Receiver distances.
        j_bounds: Boundary distances; None stands for no boundary.
        caps: Enumeration caps.
        samples: Angle samples per receiver distance.
    """

    js: tuple[int, ...] = (1, 2, 3)
    j_bounds: tuple[int | None, ...] = (None, 0, 1, 2, 3)
    caps: OracleCaps = OracleCaps(9, 6)
    samples: int = 5


@dataclass(frozen=True, slots=True)
class RunConfig:
    """A fully validated run configuration.

    Attributes:
        stack: The material stack.
        geometry: The geometry.
        approx: Approximation settings, None when not configured.
        sweep: Sweep axis, None when not sweeping.
        output: Output destination and format.
        oracle: Oracle-check matrix.
    """

    stack: StackSpec
    geometry: Geometry
    approx: ApproxConfig | None = None
    sweep: SweepSpec | None = None
    output: OutputSpec = OutputSpec()
    oracle: OracleSpec = OracleSpec()


def _typed(key: str, value: Any, kind: str) -> Any:  # noqa: ANN401
    match kind:
        case "float" if isinstance(value, (int, float)) and not isinstance(
            value,
            bool,
        ):
            if not math.isfinite(value):
                raise ValidationError(key, "must be finite")
            return float(value)
        case "int" if isinstance(value, int) and not isinstance(value, bool):
            return value
        case "bool" if isinstance(value, bool):
            return value
        case "str" if isinstance(value, str):
            return value
        case "list" if isinstance(value, list):
            return value
    raise ValidationError(key, f"must be of type {kind}")


def _section(
    doc: dict[str, Any],
    name: str,
) -> dict[str, Any] | None:
    if name not in doc:
        if name in _REQUIRED_SECTIONS:
            raise ValidationError(name, "section required")
        return None
    raw = doc[name]
    if not isinstance(raw, dict):
        raise ValidationError(name, "must be a table")
    schema = _KEYS[name]
    for key in raw:
        if key not in schema:
            raise ValidationError(f"{name}.{key}", "unknown key")
    result = {}
    for key, (kind, required) in schema.items():
        if key in raw:
            result[key] = _typed(f"{name}.{key}", raw[key], kind)
        elif required:
            raise ValidationError(f"{name}.{key}", "required")
    return result


def _int_list(key: str, values: list[Any]) -> tuple[int, ...]:
    return tuple(_typed(f"{key}[{i}]", v, "int") for i, v in enumerate(values))


def _sweep(raw: dict[str, Any]) -> SweepSpec:
    variable = raw["variable"]
    if variable not in get_args(SweepVariable.__value__):
        raise ValidationError(
            "sweep.variable",
            f"one of {', '.join(get_args(SweepVariable.__value__))}",
        )
    if not raw["values"]:
        raise ValidationError("sweep.values", "at least one value")
    if variable == "d":
        values: tuple[float, ...] | tuple[int, ...] = tuple(
            _typed(f"sweep.values[{i}]", v, "float")
            for i, v in enumerate(raw["values"])
        )
    else:
        values = _int_list("sweep.values", raw["values"])
    return SweepSpec(variable, values)


def _output(raw: dict[str, Any] | None) -> OutputSpec:
    if raw is None:
        return OutputSpec()
    fmt = raw.get("format", "csv")
    if fmt not in get_args(OutputFormat.__value__):
        raise ValidationError("output.format", "csv or tsv")
    path = raw.get("path")
    return OutputSpec(Path(path) if path else None, fmt)


def _oracle(raw: dict[str, Any] | None) -> OracleSpec:
    if raw is None:
        return OracleSpec()
    default = OracleSpec()
    js = _int_list("oracle.J", raw["J"]) if "J" in raw else default.js
    if not js or min(js) < 1:
        raise ValidationError("oracle.J", "non-empty, every J >= 1")
    bounds: tuple[int | None, ...] = (
        _int_list("oracle.j_bounds", raw["j_bounds"])
        if "j_bounds" in raw
        else tuple(b for b in default.j_bounds if b is not None)
    )
    if any(b is not None and b < 0 for b in bounds):
        raise ValidationError("oracle.j_bounds", "every J_bound >= 0")
    if raw.get("boundary_less", True):
        bounds = (None, *bounds)
    caps = OracleCaps(
        raw.get("n_max", default.caps.n_max),
        raw.get("m_max", default.caps.m_max),
    )
    samples = raw.get("samples", default.samples)
    if samples < 1:
        raise ValidationError("oracle.samples", "samples >= 1")
    if caps.n_max < 0 or caps.m_max < 0:
        raise ValidationError("oracle.n_max", "caps >= 0")
    return OracleSpec(js, bounds, caps, samples)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration document.

    Args:
        text: The TOML document.

    Returns:
        The validated run configuration.

    Raises:
        ConfigParseError: If the document is not valid TOML.
        ValidationError: If a section or key is unknown, missing or out
            of its domain; the message starts with the key path.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        column = getattr(exc, "colno", None)
        if line is None and (match := _TOML_POSITION.search(str(exc))):
            line, column = int(match[1]), int(match[2])
        raise ConfigParseError(
            getattr(exc, "msg", str(exc)),
            line or 0,
            column or 0,
        ) from exc
    for name in doc:
        if name not in _KEYS:
            raise ValidationError(name, "unknown section")

    stack = StackSpec(**_section(doc, "stack") or {})
    geometry_raw = _section(doc, "geometry") or {}
    geometry = Geometry(**{
        _GEOMETRY_FIELDS.get(k, k): v for k, v in geometry_raw.items()
    })
    approx_raw = _section(doc, "approx")
    sweep_raw = _section(doc, "sweep")
    return RunConfig(
        stack=stack,
        geometry=geometry,
        approx=None if approx_raw is None else ApproxConfig(**approx_raw),
        sweep=None if sweep_raw is None else _sweep(sweep_raw),
        output=_output(_section(doc, "output")),
        oracle=_oracle(_section(doc, "oracle")),
    )


def load_config(path: PathLike[str] | str) -> RunConfig:
    """Read and parse a configuration file.

    Args:
        path: Path to the TOML file.

    Returns:
        The validated run configuration.

    Raises:
        WinocError: If the file cannot be read.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"cannot read {path}: {exc.strerror}"
        raise WinocError(msg) from exc
    return parse_config(text)


def reference_config() -> RunConfig:
    """Load the reference configuration shipped with the package."""
    resource = files("winoc") / "data" / "reference.toml"
    return parse_config(resource.read_text(encoding="utf-8"))


def with_overrides(
    cfg: RunConfig,
    *,
    r: int | None = None,
    q: int | None = None,
    theta_bound: float | None = None,
    fmt: OutputFormat | None = None,
    out: Path | None = None,
) -> RunConfig:
    """Apply command-line overrides to a configuration.

    Args:
        cfg: The configuration read from file.
        r: Number of angle samples.
        q: Extra pair count of the angle-bound path.
        theta_bound: Explicit angle bound in radians.
        fmt: Output format.
        out: Output file.

    Returns:
        A new, validated configuration; None leaves a value unchanged.
    """
    changes = {
        name: value
        for name, value in (
            ("r", r),
            ("q", q),
            ("theta_bound", theta_bound),
        )
        if value is not None
    }
    geometry = replace(cfg.geometry, **changes) if changes else cfg.geometry
    output = OutputSpec(
        cfg.output.path if out is None else out,
        cfg.output.format if fmt is None else fmt,
    )
    return replace(cfg, geometry=geometry, output=output)
