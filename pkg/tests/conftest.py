import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("antlab", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("antlab")


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("ANTLAB_CACHE", str(d))
    return str(d)


@pytest.fixture(autouse=True)
def _no_user_cache(monkeypatch):
    # keep the developer's cache out of the test run unless a test asks for one
    if "ANTLAB_CACHE" in os.environ:
        monkeypatch.delenv("ANTLAB_CACHE")


ACCEPTANCE = {}


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, passed, detail):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE[number] = line
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
