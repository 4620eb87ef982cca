"""Shared fixtures plus the acceptance-criteria summary hook."""

import math

import pytest

import derham as dr

# criterion number -> (passed, note); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(num: int, passed: bool, note: str) -> None:
    ACCEPTANCE[num] = (bool(passed), note)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        passed, note = ACCEPTANCE[num]
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {word} ({note})")


@pytest.fixture(scope="session")
def minkowski():
    return dr.build_preset("minkowski_inverse")


@pytest.fixture(scope="session")
def cantor():
    return dr.build_preset("cantor")


@pytest.fixture(scope="session")
def fair():
    return dr.build_preset("bernoulli", (0.5, 0.5))


@pytest.fixture(scope="session")
def bern14():
    return dr.build_preset("bernoulli", (0.25, 0.75))


@pytest.fixture(scope="session")
def okamoto26():
    return dr.build_preset("okamoto", (0.2, 0.6))


@pytest.fixture(scope="session")
def koch():
    return dr.build_preset("derham", (0.5, math.sqrt(3) / 6))
