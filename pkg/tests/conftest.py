import os
import subprocess
import sys

import pytest

from ucrystal.ffield import ff_make

# criterion number -> (status, title, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(num, title, ok, detail=""):
    ACCEPTANCE[num] = ("PASS" if ok else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[num]
        line = f"[{status}] {num}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def F3():
    return ff_make(3, 1)


@pytest.fixture(scope="session")
def F9():
    return ff_make(3, 2)


def run_cli(*args, env=None, cwd=None):
    full = dict(os.environ)
    full.update(env or {})
    return subprocess.run([sys.executable, "-m", "ucrystal.cli", *args], capture_output=True,
                          text=True, env=full, cwd=cwd, timeout=600)


@pytest.fixture
def cli():
    return run_cli
