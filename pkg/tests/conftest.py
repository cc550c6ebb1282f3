import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_addoption(parser):
    parser.addoption("--acceptance-quick", action="store_true", help="run the acceptance criteria with reduced sample counts")


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k].line())
    passed = sum(r.passed for r in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
