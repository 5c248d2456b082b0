import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    outcome: dict[int, bool] = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            crit = dict(getattr(rep, "user_properties", ())).get("criterion")
            if crit is None:
                continue
            ok = key == "passed"
            outcome[crit] = outcome.get(crit, True) and ok
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(outcome):
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if outcome[crit] else 'FAIL'}")
