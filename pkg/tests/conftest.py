import numpy as np
import pytest

import acceptance_report
from helirod.geometry import ReferenceConfig, preset, section_properties
from helirod.statics import LoadCase, solve_statics


def pytest_terminal_summary(terminalreporter):
    if acceptance_report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report.LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def proto1():
    return preset("prototype1")


@pytest.fixture(scope="session")
def props1(proto1):
    return section_properties(proto1)


@pytest.fixture(scope="session")
def ref1(proto1):
    return ReferenceConfig.from_geometry(proto1)


@pytest.fixture(scope="session")
def warm_solver(proto1):
    """Trigger JIT compilation so timed tests measure the solver, not the compiler."""
    solve_statics(proto1, LoadCase(tau=0.1))
    return True


@pytest.fixture(scope="session")
def sol_07(proto1, warm_solver):
    return solve_statics(proto1, LoadCase(tau=0.7))


@pytest.fixture(scope="session")
def sol_07_gravity(proto1, warm_solver):
    return solve_statics(proto1, LoadCase(tau=0.7, gravity_enabled=True))


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
