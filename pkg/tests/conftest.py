from __future__ import annotations

from importlib.resources import files

import pytest

from winoc.cli import RunConfig, reference_config
from winoc.model import Geometry, StackSpec


@pytest.fixture(scope="session")
def reference() -> RunConfig:
    return reference_config()


@pytest.fixture(scope="session")
def reference_text() -> str:
    return (files("winoc") / "data" / "reference.toml").read_text(
        encoding="utf-8",
    )


@pytest.fixture(scope="session")
def stack(reference: RunConfig) -> StackSpec:
    return reference.stack


@pytest.fixture(scope="session")
def geometry(reference: RunConfig) -> Geometry:
    return reference.geometry
