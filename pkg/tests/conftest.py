import sys

import pytest
from hypothesis import HealthCheck, settings

from teachkg import build_kg, load_corpus, sample_corpus_path

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def sample_corpus():
    return load_corpus(sample_corpus_path())


@pytest.fixture
def sample_kg(sample_corpus):
    """Fresh sample graph after extraction and inference."""
    return build_kg(sample_corpus)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
