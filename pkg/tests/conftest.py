import pytest

_CRITERIA: dict[int, tuple[str, bool | None, str]] = {}


class CriterionLog:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.details: list[str] = []
        _CRITERIA[number] = (title, None, "")

    def note(self, text: str):
        self.details.append(text)

    def finish(self, ok: bool):
        _CRITERIA[self.number] = (self.title, ok, "; ".join(self.details))
        line = f"criterion {self.number} [{'PASS' if ok else 'FAIL'}] {self.title}: {'; '.join(self.details)}"
        print(line)
        return ok


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    log = CriterionLog(*marker.args)
    yield log
    if _CRITERIA[log.number][1] is None:
        _CRITERIA[log.number] = (log.title, False, "; ".join(log.details) or "raised before finishing")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{number}. [{status}] {title} -- {detail}")
