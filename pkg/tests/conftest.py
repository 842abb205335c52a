import io
import shutil
from pathlib import Path

import pytest

from citecology.corpus import parse_citations
from citecology.fixtures import FOCAL, block_corpus, fixture_path

DATA = Path(__file__).parent / "data"


def corpus_from_text(text, label=""):
    return parse_citations(io.StringIO(text), label=label)


@pytest.fixture(scope="session")
def fixture_corpus():
    return block_corpus()


@pytest.fixture
def fixture_files(tmp_path):
    """Bundled fixture CSVs copied into a scratch directory."""
    out = {}
    for key, name in (("corpus", "fixture_citations.csv"), ("metadata", "fixture_journals.csv")):
        dest = tmp_path / name
        shutil.copyfile(fixture_path(name), dest)
        out[key] = dest
    out["focal"] = FOCAL
    return out


@pytest.fixture
def toy_corpus():
    # F cites A:3, B:1, C:2; A and B cite F back
    return corpus_from_text("citing,cited,count\nF,A,3\nF,B,1\nF,C,2\nA,F,2\nB,F,7\n")


# -- acceptance summary --------------------------------------------------------------

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = (marker.args[0], marker.args[1])
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if failed or key not in _acceptance:
        _acceptance[key] = _acceptance.get(key, True) and not failed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_acceptance.items()):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")
