import pytest

_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance(request):
    """Collects one verdict per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, detail = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
