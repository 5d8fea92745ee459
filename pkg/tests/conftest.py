import os

import pytest

from ballistic.enumeration import enumerate_tables, load_tables, oracle_tables

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def tables6():
    return enumerate_tables(6)


@pytest.fixture(scope="session")
def oracle6():
    return oracle_tables(6)


@pytest.fixture(scope="session")
def tables18():
    path = os.environ.get("BALLISTIC_TABLES18")
    if path and os.path.exists(path):
        return load_tables(path)
    return enumerate_tables(18)


@pytest.fixture(scope="session")
def golden2():
    return load_tables(os.path.join(DATA, "tables_depth2.json"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
