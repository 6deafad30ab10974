import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # textgen et al.

from rmdseq import code as rc
from rmdseq.engine import available_engines
from rmdseq.tables import build_tables

FAMILIES = ("rmd2inf", "rmd24inf", "rmd245")
FAST_FAMILIES = ("rmd2inf", "rmd24inf")  # lookahead fits the byte tables


@pytest.fixture(scope="session")
def specs():
    return {sid: rc.get_code(sid) for sid in FAMILIES}


@pytest.fixture(scope="session")
def tables_of(specs):
    cache = {}

    def get(sid):
        if sid not in cache:
            cache[sid] = build_tables(specs[sid])
        return cache[sid]

    return get


@pytest.fixture(scope="session")
def counts_of(specs):
    cache = {}

    def get(sid):
        if sid not in cache:
            cache[sid] = rc.CountTables(specs[sid])
        return cache[sid]

    return get


def pytest_generate_tests(metafunc):
    if "engine" in metafunc.fixturenames:
        metafunc.parametrize("engine", available_engines())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
