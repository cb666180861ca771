import math
import sys

import pytest

from losmimo.moments import MomentConfig


@pytest.fixture
def cfg22():
    return MomentConfig(2, 2, math.pi)



def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
