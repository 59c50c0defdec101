import functools

import pytest

from phaseinv import scenarios
from phaseinv.forward import constant_well_phases
from phaseinv.gelfand_levitan import reconstruct


@functools.lru_cache(maxsize=None)
def well_phases(C, a, k, n, dps=60):
    return constant_well_phases(C, a, k, n, dps=dps)


@functools.lru_cache(maxsize=None)
def scenario_runs(name):
    return tuple(scenarios.get(name))


@functools.lru_cache(maxsize=None)
def scenario_result(name, label):
    run = next(r for r in scenario_runs(name) if r.label == label)
    curve, report = reconstruct(run.phases, run.config)
    return run, curve, report


@pytest.fixture(scope="session")
def table2_phases():
    return well_phases(1.2, 2.0, 1.0, 11)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
