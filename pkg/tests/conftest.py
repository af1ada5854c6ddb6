import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diaryforge import fixtures  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fixture_corpus(tmp_path_factory):
    """Default 5 year x 4 week synthetic corpus, seed 11, with one transcript gap."""
    root = tmp_path_factory.mktemp("corpus") / "fx"
    spec = fixtures.FixtureSpec(transcript_gaps=((1919, 2),))
    layout = fixtures.generate_fixture_corpus(11, spec, root)
    return layout


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
