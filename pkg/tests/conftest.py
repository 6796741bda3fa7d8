import numpy as np
import pytest

from nullhelix.eikonal import FieldSpec
from nullhelix.frame import CurveSpec

EX1 = ["-sinh(t)/sqrt(2)", "-cosh(t)/sqrt(2)", "-cos(t)/sqrt(2)", "-sin(t)/sqrt(2)"]
EX2 = ["-(t^3/6 + t)", "-(t^2/2)", "-t", "-(t^3/6)"]


def ex1_curve(domain=(-2.0, 2.0), n=201):
    return CurveSpec.from_strings(EX1, domain, n)


def ex2_curve(domain=(-1.0, 1.0), n=201):
    return CurveSpec.from_strings(EX2, domain, n)


@pytest.fixture
def ex1():
    return ex1_curve()


@pytest.fixture
def ex2():
    return ex2_curve()


@pytest.fixture
def field():
    return FieldSpec.from_string


def ex1_position(t):
    return -np.array([np.sinh(t), np.cosh(t), np.cos(t), np.sin(t)]) / np.sqrt(2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
