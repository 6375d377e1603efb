from __future__ import annotations

from pathlib import Path

import pytest

from winoc._errors import ConfigParseError, ValidationError, WinocError
from winoc.cli import RunConfig, load_config, parse_config
from winoc.cli._config import OracleSpec, SweepSpec, with_overrides
from winoc.oracle import OracleCaps


def test_reference_config(reference: RunConfig) -> None:
    assert reference.geometry.j == 2
    assert reference.geometry.r == 10
    assert reference.geometry.j_bound == 1
    assert (reference.stack.n1, reference.stack.n2, reference.stack.n3) == (
        2.0,
        1.96,
        3.42,
    )
    assert reference.approx is not None
    assert reference.approx.t_c == 1e-7
    assert reference.sweep is None
    assert reference.output.path is None
    assert reference.output.format == "csv"
    assert reference.oracle == OracleSpec(
        js=(1, 2, 3),
        j_bounds=(None, 0, 1, 2, 3),
        caps=OracleCaps(9, 6),
        samples=5,
    )


def test_round_trip_through_file(reference_text: str, tmp_path: Path) -> None:
    path = tmp_path / "run.toml"
    path.write_text(reference_text, encoding="utf-8")
    assert load_config(path) == parse_config(reference_text)


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(WinocError) as excinfo:
        load_config(tmp_path / "absent.toml")
    assert excinfo.value.exit_code == 2


def test_missing_key(reference_text: str) -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_config(reference_text.replace("J = 2\n", ""))
    assert excinfo.value.key == "geometry.J"


def test_zero_samples(reference_text: str) -> None:
    with pytest.raises(ValidationError, match="r >= 1"):
        parse_config(reference_text.replace("r = 10", "r = 0"))


def test_unknown_key(reference_text: str) -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_config(reference_text + "\n[geometry.extra]\nx = 1\n")
    assert excinfo.value.key == "geometry.extra"
    with pytest.raises(ValidationError) as excinfo:
        parse_config(reference_text.replace("q = 0", "p = 0"))
    assert excinfo.value.key == "geometry.p"


def test_unknown_section(reference_text: str) -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_config(reference_text + "\n[plot]\ncolor = 'red'\n")
    assert excinfo.value.key == "plot"


def test_wrong_type(reference_text: str) -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_config(reference_text.replace("J = 2", "J = 2.5"))
    assert excinfo.value.key == "geometry.J"
    assert excinfo.value.exit_code == 1


def test_parse_error() -> None:
    with pytest.raises(ConfigParseError) as excinfo:
        parse_config("[stack]\nl1 = = 1\n")
    assert excinfo.value.line == 2
    assert excinfo.value.exit_code == 1


def test_missing_section() -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_config("[geometry]\nJ = 1\nd = 0.0\nL = 1.0\n")
    assert excinfo.value.key == "stack"


def test_sweep_section(reference_text: str) -> None:
    cfg = parse_config(
        reference_text + '\n[sweep]\nvariable = "d"\nvalues = [1e-6, 2]\n',
    )
    assert cfg.sweep == SweepSpec("d", (1e-6, 2.0))
    with pytest.raises(ValidationError) as excinfo:
        parse_config(
            reference_text + '\n[sweep]\nvariable = "L"\nvalues = [1]\n',
        )
    assert excinfo.value.key == "sweep.variable"
    with pytest.raises(ValidationError) as excinfo:
        parse_config(
            reference_text + '\n[sweep]\nvariable = "J"\nvalues = [1.5]\n',
        )
    assert excinfo.value.key == "sweep.values[0]"


def test_boundary_less_and_optional_sections(reference_text: str) -> None:
    text = reference_text.replace("J_bound = 1\n", "")
    head = text.split("[approx]")[0]
    cfg = parse_config(head)
    assert cfg.geometry.j_bound is None
    assert cfg.approx is None
    assert cfg.oracle == OracleSpec()


def test_overrides(reference: RunConfig, tmp_path: Path) -> None:
    cfg = with_overrides(
        reference,
        r=3,
        q=1,
        theta_bound=0.4,
        fmt="tsv",
        out=tmp_path / "out.tsv",
    )
    assert (cfg.geometry.r, cfg.geometry.q) == (3, 1)
    assert cfg.geometry.theta_bound == 0.4
    assert cfg.output.format == "tsv"
    assert cfg.output.path == tmp_path / "out.tsv"
    assert with_overrides(reference) == reference
    with pytest.raises(ValidationError):
        with_overrides(reference, r=0)
