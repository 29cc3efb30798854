import pathlib

from hypothesis import HealthCheck, settings
import pytest

from tdcheck import complete, parse_dba

ROOT = pathlib.Path(__file__).resolve().parents[1]
SAMPLES = ROOT / "samples"

settings.register_profile(
    "repo", max_examples=100, derandomize=True, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def gzigzag():
    return parse_dba((SAMPLES / "gzigzag.dba").read_text())


@pytest.fixture(scope="session")
def fab():
    return parse_dba((SAMPLES / "fab.dba").read_text())


@pytest.fixture(scope="session")
def fab_completed(fab):
    return complete(fab)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
