import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from visagent.bench.phantom import band_phantom, nested_phantom


@pytest.fixture(scope="session")
def phantom_100_125():
    """32^3 sphere phantom filling scalar band [100, 125]."""
    return band_phantom((100.0, 125.0), dims=(32, 32, 32), seed=3)


@pytest.fixture(scope="session")
def nested():
    return nested_phantom(dims=(32, 32, 32), seed=5)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    reports = []
    for key in ("passed", "failed", "error"):
        reports.extend(terminalreporter.stats.get(key, []))
    acceptance = [r for r in reports if "test_acceptance" in r.nodeid and r.when == "call"]
    if not acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for report in sorted(acceptance, key=lambda r: r.nodeid):
        status = "PASS" if report.passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {report.nodeid.split('::')[-1]}")
