import pytest
from hypothesis import settings

# several properties hit cached tables whose first build is slow
settings.register_profile("detstat", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("detstat")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
