import pathlib

import pytest

HERE = pathlib.Path(__file__).parent
GOLDEN = HERE / "golden"
CORPUS = HERE / "corpus"

_criteria = []


@pytest.fixture
def criterion():
    """Record a named acceptance criterion's verdict for the end-of-run summary."""
    def report(label, passed, detail=""):
        _criteria.append((label, bool(passed), detail))
        assert passed, f"{label}: {detail}"
    return report


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _criteria:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f" ({detail})" if detail else ""))


def corpus_programs():
    return sorted(CORPUS.glob("*.rrc"))
