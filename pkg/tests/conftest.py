import pytest

from hlcert.trigpoly import CaseId

CASES = [CaseId(k, s) for k in (1, 2) for s in (1, -1)]


@pytest.fixture(params=CASES, ids=lambda c: c.label)
def case(request):
    return request.param


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, {})
    if log:
        terminalreporter.section("acceptance criteria")
        for num in sorted(log):
            terminalreporter.write_line(log[num])
