"""Shared fixtures: canned model documents and their parsed forms."""

from __future__ import annotations

from pathlib import Path

import pytest

from imog.document import parse_document
from imog.elements import Model

FIXTURES = Path(__file__).parent / "fixtures"

CLEAN_FIXTURES = (
    "escooter",
    "escooter_fp_context",
    "escooter_fp_context_require",
    "sp_variants",
    "void",
    "dead_block",
    "minimal",
)


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.imog.json"


def defect_path(name: str) -> Path:
    return FIXTURES / "defects" / f"{name}.imog.json"


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def load_fixture(name: str) -> Model:
    return parse_document(fixture_text(name))


@pytest.fixture(scope="session")
def escooter() -> Model:
    return load_fixture("escooter")


@pytest.fixture(scope="session")
def context_model() -> Model:
    return load_fixture("escooter_fp_context")


@pytest.fixture(scope="session")
def context_require_model() -> Model:
    return load_fixture("escooter_fp_context_require")


@pytest.fixture(scope="session")
def variants_model() -> Model:
    return load_fixture("sp_variants")


@pytest.fixture(scope="session")
def void_model() -> Model:
    return load_fixture("void")


@pytest.fixture(scope="session")
def dead_block_model() -> Model:
    return load_fixture("dead_block")


@pytest.fixture(scope="session")
def minimal_model() -> Model:
    return load_fixture("minimal")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One visible verdict line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, ()):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" in nodeid:
                name = nodeid.split("::", 1)[1]
                lines.append((name, outcome.upper()))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{outcome:6s} {name}")
