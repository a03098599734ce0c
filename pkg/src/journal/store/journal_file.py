"""On-disk journal: a JSON Lines event log plus its advisory lock file."""

import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, Union

from constants import get_lock_path
from journal.core.errors import JournalExistsError, JournalLockedError
from utils.file_io import (
    FileIOError,
    append_lines,
    ensure_parent_dir,
    safe_read_text,
    safe_write_text,
)

from .codec import encode_log, parse_log, serialize_log
from .events import EventLog, EventRecord

logger = logging.getLogger(__name__)


class JournalFile:
    """
    A journal's event log on disk.

    Records are only ever appended; existing bytes are never rewritten
    except by ``write_all``, which refuses an existing file unless told to
    overwrite it.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.lock_path = get_lock_path(self.path)

    def exists(self) -> bool:
        return self.path.exists()

    def create(self) -> None:
        """
        Create an empty journal file.

        Raises:
            JournalExistsError: If the file already exists
        """
        if self.exists():
            raise JournalExistsError(f"Journal already exists: {self.path}")
        safe_write_text(self.path, "")
        logger.info(f"Created journal {self.path}")

    def load(self) -> EventLog:
        """
        Read and decode the whole log.

        Raises:
            FileIOError: If the file cannot be read
            ReplayError: On a malformed record
            CorruptionError: On a sequence gap
        """
        if not self.exists():
            raise FileIOError(f"Journal not found: {self.path} (run 'jndm init' first)")
        log = parse_log(safe_read_text(self.path))
        logger.debug(f"Loaded {len(log)} records from {self.path}")
        return log

    def append(self, records: Iterable[EventRecord]) -> int:
        """Append records (fsynced). Returns the number written."""
        count = append_lines(self.path, encode_log(records))
        if count:
            logger.info(f"Appended {count} records to {self.path}")
        return count

    def write_all(self, log: Iterable[EventRecord], overwrite: bool = False) -> None:
        """
        Write a complete log as a new journal file, under the lock.

        Args:
            log: Records to write
            overwrite: Replace an existing journal instead of refusing

        Raises:
            JournalExistsError: If the file exists and ``overwrite`` is not set
            JournalLockedError: If another process holds the lock
        """
        ensure_parent_dir(self.path)
        with self.lock():
            if self.exists() and not overwrite:
                raise JournalExistsError(f"Refusing to overwrite existing journal: {self.path}")
            safe_write_text(self.path, serialize_log(log))
        logger.info(f"Wrote journal {self.path}")

    @contextmanager
    def lock(self) -> Iterator[None]:
        """
        Hold the advisory lock for the duration of a mutating command.

        Raises:
            JournalLockedError: If another process holds the lock
        """
        try:
            fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError as e:
            raise JournalLockedError(
                f"{self.path} is locked by another process (remove {self.lock_path} if stale)"
            ) from e
        except OSError as e:
            raise FileIOError(f"Failed to create lock {self.lock_path}: {e}") from e

        try:
            os.write(fd, str(os.getpid()).encode("ascii"))
            os.close(fd)
            yield
        finally:
            try:
                self.lock_path.unlink()
            except FileNotFoundError:
                pass
