"""Calibrate and log the figures of the shipped reference configuration.

The oxide and nitride attenuation constants are fixed at low-loss
dielectric values; the substrate constant ``lam3`` is scanned over
`LAM3_CANDIDATES` and every candidate is checked against the
calibration gates below. The frozen value must be one that passes.
"""

import logging
from dataclasses import replace
from os import PathLike
from time import perf_counter_ns

from winoc.cli import load_config, reference_config
from winoc.cli._config import RunConfig
from winoc.model import approx_total_gain, gain_ratio, total_gain

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)

LAYER_SPAN = range(2, 11)
APPROX_JS = (2, 4, 8)
AGREEMENT_J = 20
LAM3_CANDIDATES = (50.0, 100.0, 200.0, 400.0, 800.0)

SLOPE_RANGE_DB = (-70.0, -50.0)
MIN_DISPARITY = 1e6
MAX_APPROX_ERROR = 1e-3
MAX_MODEL_DIFFERENCE = 1e-5


def layer_slopes(cfg: RunConfig) -> list[float]:
    """Compute the gain change in dB per additional layer.

    Args:
        cfg: The configuration under calibration.

    Returns:
        ``H(J + 1) - H(J)`` in dB for consecutive ``J`` of `LAYER_SPAN`.
    """
    logger = logging.getLogger(__name__)
    h_db = []
    for j in LAYER_SPAN:
        result = total_gain(replace(cfg.geometry, j=j), cfg.stack)
        logger.info("J=%d: %.3f dB", j, result.h_db)
        h_db.append(result.h_db)
    return [b - a for a, b in zip(h_db, h_db[1:], strict=False)]


def approx_errors(cfg: RunConfig) -> list[float]:
    """Compute the relative error of the approximation.

    Args:
        cfg: The configuration under calibration; needs ``[approx]``.

    Returns:
        ``(H_full - H_approx) / H_full`` for every ``J`` of
        `APPROX_JS`.
    """
    if cfg.approx is None:
        msg = "the configuration has no [approx] section"
        raise ValueError(msg)
    errors = []
    for j in APPROX_JS:
        geom = replace(cfg.geometry, j=j)
        full = total_gain(geom, cfg.stack).h_linear
        approx = approx_total_gain(geom, cfg.stack, cfg.approx).h_linear
        errors.append((full - approx) / full)
    return errors


def model_agreement(cfg: RunConfig) -> float:
    """Compute the relative boundary-less/boundary-constrained gap.

    Args:
        cfg: The configuration under calibration; needs ``J_bound``.

    Returns:
        ``|H_bl - H_bc| / H_bl`` at ``J = AGREEMENT_J``.
    """
    geom = replace(cfg.geometry, j=AGREEMENT_J)
    bl = total_gain(geom, cfg.stack, bounded=False).h_linear
    bc = total_gain(geom, cfg.stack, bounded=True).h_linear
    return abs(bl - bc) / bl


def passes_gates(cfg: RunConfig) -> bool:
    """Check a configuration against every calibration gate.

    Args:
        cfg: The configuration under calibration.

    Returns:
        Whether the per-layer slope, the step-gain disparity, the
        approximation error and the model difference are all in range.
    """
    logger = logging.getLogger(__name__)
    slopes = layer_slopes(cfg)
    disparity = 1 / gain_ratio(cfg.stack)
    errors = approx_errors(cfg)
    difference = model_agreement(cfg)
    logger.info(
        "per-layer slope %.2f .. %.2f dB",
        min(slopes),
        max(slopes),
    )
    logger.info("refraction/reflection disparity %.3e", disparity)
    for j, error in zip(APPROX_JS, errors, strict=True):
        logger.info("approximation error at J=%d: %.3e", j, error)
    logger.info("model difference at J=%d: %.3e", AGREEMENT_J, difference)
    lo, hi = SLOPE_RANGE_DB
    return (
        all(lo <= s <= hi for s in slopes)
        and disparity >= MIN_DISPARITY
        and max(errors) < MAX_APPROX_ERROR
        and difference < MAX_MODEL_DIFFERENCE
    )


def scan_substrate_loss(cfg: RunConfig) -> list[float]:
    """Scan the substrate attenuation constant.

    Args:
        cfg: The configuration whose ``lam3`` is replaced.

    Returns:
        The candidates of `LAM3_CANDIDATES` that pass every gate.
    """
    logger = logging.getLogger(__name__)
    passing = []
    for lam3 in LAM3_CANDIDATES:
        logger.info("lam3 = %g 1/m", lam3)
        candidate = replace(cfg, stack=replace(cfg.stack, lam3=lam3))
        if passes_gates(candidate):
            passing.append(lam3)
        else:
            logger.info("lam3 = %g 1/m fails a gate", lam3)
    return passing


def main(config: PathLike[str] | str | None = None) -> None:
    """Scan the substrate loss, then log the frozen figures.

    Args:
        config: Path to a TOML configuration; the shipped reference
            when omitted.
    """
    t0 = perf_counter_ns()
    logger = logging.getLogger(__name__)
    cfg = reference_config() if config is None else load_config(config)
    passing = scan_substrate_loss(cfg)
    logger.info("passing lam3 values: %s", passing)
    logger.info("frozen lam3 = %g 1/m", cfg.stack.lam3)
    if not passes_gates(cfg):
        logger.error("the frozen configuration fails a calibration gate")
    logger.info("finished in %.1f ms", (perf_counter_ns() - t0) / 10**6)


if __name__ == "__main__":
    main()
