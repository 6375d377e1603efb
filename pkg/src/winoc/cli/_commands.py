"""Commands of the ``winoc`` executable."""

from __future__ import annotations

__all__ = ("COMMANDS", "build_parser", "main", "run_command")

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from time import perf_counter_ns
from types import MappingProxyType
from typing import TYPE_CHECKING, Any, Literal, get_args

from winoc.__metadata__ import __version__
from winoc._errors import ValidationError, WinocError
from winoc._typing import Command, OutputFormat
from winoc.cli._config import load_config, reference_config, with_overrides
from winoc.cli._output import emit_csv, schema_help
from winoc.model import (
    approx_total_gain,
    complexity_report,
    dropped_gain,
    theta_threshold,
    total_gain,
)
from winoc.oracle import check_counts

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from winoc.cli._config import RunConfig
    from winoc.model import Geometry

type Detail = Literal["summary", "angle", "class"]
type Rows = list[dict[str, Any]]

_SWEEP_FIELDS = MappingProxyType({
    "J": "j",
    "d": "d",
    "J_bound": "j_bound",
    "r": "r",
})
_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _geometries(cfg: RunConfig) -> list[Geometry]:
    if cfg.sweep is None:
        return [cfg.geometry]
    name = _SWEEP_FIELDS[cfg.sweep.variable]
    return [replace(cfg.geometry, **{name: v}) for v in cfg.sweep.values]


def _identity(geom: Geometry) -> dict[str, Any]:
    return {"J": geom.j, "J_bound": geom.j_bound, "d": geom.d, "r": geom.r}


def _gain(cfg: RunConfig, *, jobs: int, detail: Detail) -> tuple[str, Rows]:
    rows: Rows = []
    for geom in _geometries(cfg):
        result = total_gain(
            geom,
            cfg.stack,
            per_class=detail == "class",
            jobs=jobs,
        )
        head = {**_identity(geom), "model": result.model}
        if detail == "angle":
            rows.extend(
                {**head, **a._asdict()} for a in result.per_angle
            )
        elif detail == "class":
            rows.extend(
                {**head, **c._asdict()} for c in result.per_class or ()
            )
        else:
            rows.append({
                **head,
                "theta_bound": result.theta_bound,
                "h_linear": result.h_linear,
                "h_db": result.h_db,
                "loops_executed": result.loops_executed,
            })
    schema = "gain" if detail == "summary" else f"gain-{detail}"
    return schema, rows


def _sweep(cfg: RunConfig, *, jobs: int, detail: Detail) -> tuple[str, Rows]:
    if cfg.sweep is None:
        raise ValidationError("sweep", "section required by sweep")
    return _gain(cfg, jobs=jobs, detail=detail)


def _compare(cfg: RunConfig, *, jobs: int, detail: Detail) -> tuple[str, Rows]:
    del detail
    rows: Rows = []
    for geom in _geometries(cfg):
        bl = total_gain(geom, cfg.stack, bounded=False, jobs=jobs)
        bc = total_gain(geom, cfg.stack, bounded=True, jobs=jobs)
        difference = bl.h_linear - bc.h_linear
        rows.append({
            **_identity(geom),
            "h_bl": bl.h_linear,
            "h_bc": bc.h_linear,
            "difference": difference,
            "relative_difference": (
                abs(difference) / bl.h_linear if bl.h_linear > 0 else 0.0
            ),
            "h_bl_db": bl.h_db,
            "h_bc_db": bc.h_db,
        })
    return "compare-models", rows


def _approx(cfg: RunConfig, *, jobs: int, detail: Detail) -> tuple[str, Rows]:
    del detail
    if cfg.approx is None:
        raise ValidationError("approx.t_c", "required by approx-error")
    rows: Rows = []
    for geom in _geometries(cfg):
        full = total_gain(geom, cfg.stack, per_class=True, jobs=jobs)
        approx = approx_total_gain(
            geom,
            cfg.stack,
            cfg.approx,
            per_class=True,
            jobs=jobs,
        )
        gap = full.h_linear - approx.h_linear
        rows.append({
            **_identity(geom),
            "h_full": full.h_linear,
            "h_approx": approx.h_linear,
            "gap_db": full.h_db - approx.h_db if approx.h_linear > 0 else None,
            "relative_error": (
                gap / full.h_linear if full.h_linear > 0 else 0.0
            ),
            "dropped": dropped_gain(full, approx),
            "theta_t": theta_threshold(geom, cfg.stack, cfg.approx).theta_t,
        })
    return "approx-error", rows


def _complexity(
    cfg: RunConfig,
    *,
    jobs: int,
    detail: Detail,
) -> tuple[str, Rows]:
    del jobs, detail
    rows: Rows = []
    for geom in _geometries(cfg):
        report = complexity_report(geom, cfg.stack)
        rows.append({
            **_identity(geom),
            "loop_bl": report.loop_bl,
            "loop_bc": report.loop_bc,
            "empirical_difference": report.empirical_difference,
            "predicted_difference": report.predicted_difference,
            "relative_gap": report.relative_gap,
            "negative_terms": report.negative_terms,
        })
    return "complexity", rows


def _oracle(cfg: RunConfig, *, jobs: int, detail: Detail) -> tuple[str, Rows]:
    del jobs, detail
    spec = cfg.oracle
    comparisons = check_counts(
        cfg.geometry,
        cfg.stack,
        spec.caps,
        js=spec.js,
        j_bounds=spec.j_bounds,
        samples=spec.samples,
    )
    rows = [
        {
            "J": c.j,
            "J_bound": c.j_bound,
            "theta": c.theta,
            "n": c.n,
            "m": c.m,
            "counted": c.counted,
            "enumerated": c.enumerated,
        }
        for c in comparisons
    ]
    return "oracle-check", rows


COMMANDS: MappingProxyType[
    Command,
    Callable[..., tuple[str, Rows]],
] = MappingProxyType({
    "gain": _gain,
    "compare-models": _compare,
    "approx-error": _approx,
    "sweep": _sweep,
    "complexity": _complexity,
    "oracle-check": _oracle,
})


def run_command(
    cmd: Command,
    cfg: RunConfig,
    *,
    jobs: int = 1,
    detail: Detail = "summary",
) -> int:
    """Run one command and write its table.

    Args:
        cmd: The command name.
        cfg: The validated configuration.
        jobs: Worker processes for angle evaluation.
        detail: Row granularity of the gain and sweep commands.

    Returns:
        The process exit status: 0 on success, otherwise the exit code
        of the error that stopped the command.
    """
    t0 = perf_counter_ns()
    logger = logging.getLogger(__name__)
    try:
        schema, rows = COMMANDS[cmd](cfg, jobs=jobs, detail=detail)
        emit_csv(rows, schema, cfg.output.path, cfg.output.format)
    except WinocError as exc:
        logger.error("%s: %s", cmd, exc)  # noqa: TRY400
        return exc.exit_code
    logger.info("%s wrote %d rows", cmd, len(rows))
    logger.info("finished in %.1f ms", (perf_counter_ns() - t0) / 10**6)
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser of the ``winoc`` executable."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        help="TOML configuration (default: the shipped reference)",
    )
    common.add_argument(
        "--out",
        type=Path,
        help="output file (default: stdout)",
    )
    common.add_argument(
        "--format",
        choices=get_args(OutputFormat.__value__),
        help="output format",
    )
    common.add_argument("--r", type=int, help="number of angle samples")
    common.add_argument("--q", type=int, help="extra pairs of the bound path")
    common.add_argument(
        "--theta-bound",
        type=float,
        help="explicit launch-angle bound in radians",
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker processes for angle samples",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log INFO (-v) or DEBUG (-vv) to stderr",
    )
    parser = argparse.ArgumentParser(
        prog="winoc",
        description="Channel gain of multi-layer 3D wireless NoC stacks.",
        epilog=schema_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(
            name,
            parents=[common],
            epilog=schema_help(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        if name in {"gain", "sweep"}:
            cmd.add_argument(
                "--detail",
                choices=get_args(Detail.__value__),
                default="summary",
                help="one row per run, per angle or per class",
            )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``winoc`` executable.

    Args:
        argv: Command-line arguments without the program name.

    Returns:
        The process exit status.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[
            min(args.verbose, 2)
        ],
        format=_LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    logger = logging.getLogger(__name__)
    try:
        cfg = (
            reference_config()
            if args.config is None
            else load_config(args.config)
        )
        cfg = with_overrides(
            cfg,
            r=args.r,
            q=args.q,
            theta_bound=args.theta_bound,
            fmt=args.format,
            out=args.out,
        )
    except WinocError as exc:
        logger.error("%s", exc)  # noqa: TRY400
        return exc.exit_code
    if args.jobs < 1:
        logger.error("--jobs: jobs >= 1")
        return ValidationError.exit_code
    return run_command(
        args.command,
        cfg,
        jobs=args.jobs,
        detail=getattr(args, "detail", "summary"),
    )
