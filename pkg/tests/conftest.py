import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))

from echlab.io import read_input  # noqa: E402

CORPUS = TESTS.parent / "src" / "echlab" / "corpus"
CORPUS_NAMES = ["trivial", "acyclic", "p4_torsion", "g2_stress"]


def corpus_path(name: str) -> Path:
    return CORPUS / f"{name}.json"


def corpus_hf(name: str):
    return read_input(corpus_path(name)).to_hfdata()


def corpus_genus(name: str) -> int:
    return int(corpus_hf(name).metadata["genus"])


@pytest.fixture(params=CORPUS_NAMES)
def corpus_name(request):
    return request.param


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
