"""Shared fixtures: the worked-example journal and scratch journal files."""

import shutil
import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from journal.core.journal import Journal
from journal.store.codec import parse_log
from journal.store.events import EventLog

FIXTURES = Path(__file__).parent / "fixtures"
WORKED_EXAMPLE_PATH = FIXTURES / "worked_example.jnl"


@pytest.fixture
def worked_example_log() -> EventLog:
    """Three published, labeled articles (A1, A2 acceptable; A3 not) and S4 due at epoch 6."""
    return parse_log(WORKED_EXAMPLE_PATH.read_text(encoding="utf-8"))


@pytest.fixture
def worked_example_journal(worked_example_log) -> Journal:
    return Journal.from_log(worked_example_log)


@pytest.fixture
def worked_example_file(tmp_path) -> Path:
    """A writable copy of the worked-example journal."""
    target = tmp_path / "worked_example.jnl"
    shutil.copyfile(WORKED_EXAMPLE_PATH, target)
    return target


@pytest.fixture
def journal_path(tmp_path) -> Path:
    return tmp_path / "journal.jnl"


@pytest.fixture
def isolated(tmp_path, monkeypatch) -> Path:
    """Run from an empty directory with no JNDM_* variables and no home config."""
    from config.config_loader import ENGINE_ENV_VARS
    from constants import ENV_JOURNAL

    for name in [ENV_JOURNAL, *ENGINE_ENV_VARS]:
        monkeypatch.delenv(name, raising=False)
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    work = tmp_path / "work"
    work.mkdir()
    monkeypatch.chdir(work)
    return work
