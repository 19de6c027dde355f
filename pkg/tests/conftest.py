import pytest

_LINES: dict[int, str] = {}


class Verdict:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.details: list[str] = []
        self.passed = None

    def note(self, text):
        self.details.append(text)
        print(f"  [{self.number}] {text}")

    def finish(self, passed):
        self.passed = bool(passed)
        mark = "PASS" if self.passed else "FAIL"
        line = f"criterion {self.number} {mark}: {self.title}"
        if self.details:
            line += " | " + "; ".join(self.details[-3:])
        _LINES[self.number] = line
        print(line)
        return self.passed


@pytest.fixture
def criterion(request):
    number, title = request.node.get_closest_marker("criterion").args
    v = Verdict(number, title)
    yield v
    if v.passed is None:
        # the test raised before reaching its verdict
        v.finish(False)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
