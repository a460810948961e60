import pytest

from spaces import RX_TEXT, RZ_TEXT, rx_parts


@pytest.fixture
def rx():
    return rx_parts()


@pytest.fixture
def rz():
    return rx_parts(first=0)


@pytest.fixture
def model_dir(tmp_path):
    (tmp_path / "rx.csp").write_text(RX_TEXT)
    (tmp_path / "rz.csp").write_text(RZ_TEXT)
    return tmp_path


# -- acceptance summary -----------------------------------------------------

_OUTCOMES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")
    config.stash[_OUTCOMES] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and report.passed):
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    seen = item.config.stash[_OUTCOMES]
    previous = seen.get(number, (title, True, ""))
    seen[number] = (title, previous[1] and report.passed, detail or previous[2])


def pytest_terminal_summary(terminalreporter, config):
    seen = config.stash[_OUTCOMES]
    if not seen:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(seen):
        title, ok, detail = seen[number]
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
