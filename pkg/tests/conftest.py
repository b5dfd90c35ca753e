import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from dynamic_gb.systems import parse_system  # noqa: E402

settings.register_profile(
    "repo",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def polys(names: str, *lines: str):
    """Parse polynomials over the space-separated variable names."""
    return parse_system("vars: " + names + "\n" + "\n".join(lines)).polynomials


def poly(names: str, line: str):
    return polys(names, line)[0]


@pytest.fixture
def xy():
    return lambda line: poly("x y", line)


_verdicts = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record a PASS/FAIL line shown in the terminal summary, then assert."""
    lines = request.config.stash.setdefault(_verdicts, [])

    def record(label: str, ok: bool, detail: str = ""):
        lines.append(f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else ""))
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_verdicts, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
