import pytest

from relaycoil.config import load_preset


@pytest.fixture(scope="session")
def sym_cfg():
    return load_preset("symmetric")


@pytest.fixture(scope="session")
def asym_cfg():
    return load_preset("asymmetric")


@pytest.fixture(scope="session")
def sym(sym_cfg):
    return sym_cfg.system


@pytest.fixture(scope="session")
def asym(asym_cfg):
    return asym_cfg.system


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT

    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(REPORT, key=lambda k: int(k.split()[0])):
        terminalreporter.write_line(REPORT[key])
