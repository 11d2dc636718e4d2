import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def well5():
    from evenres import StepPotential
    return StepPotential.well(2, -5.0, 1.0)


@pytest.fixture(scope="session")
def well20():
    from evenres import StepPotential
    return StepPotential.well(2, -20.0, 1.0)


@pytest.fixture(scope="session")
def bump4():
    from evenres import StepPotential
    return StepPotential.well(4, 2.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance_log.RESULTS):
        ok, detail = acceptance_log.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
