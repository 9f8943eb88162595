import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criterion_lines: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, text = marker.args
    status = "PASS" if call.excinfo is None else "FAIL"
    _criterion_lines[number] = f"criterion {number}: {status} ({call.duration:.2f} s) {text}"


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_lines):
        terminalreporter.write_line(_criterion_lines[number])
