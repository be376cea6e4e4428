import pytest

from gen import named_presentations, random_presentations


@pytest.fixture(scope="session")
def named():
    return named_presentations()


@pytest.fixture(scope="session")
def randoms():
    return random_presentations(seed=20261019, count=50)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::test_criterion_")[1]
            number, _, label = name.partition("_")
            if outcome != "passed" or lines.get(number, (None, "PASS"))[1] == "FAIL":
                lines[number] = (label, "FAIL")
            else:
                lines.setdefault(number, (label, "PASS"))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines, key=int):
        label, verdict = lines[number]
        terminalreporter.write_line(f"criterion {number} ({label.replace('_', ' ')}): {verdict}")
