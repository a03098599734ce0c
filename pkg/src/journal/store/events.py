"""Event records and the in-memory append-only log."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Tuple

from journal.core.errors import CorruptionError


class EventKind(Enum):
    ACCOUNT_CREATED = "account-created"
    SUBMITTED = "submitted"
    REVIEW_RECORDED = "review-recorded"
    REVIEW_WITHDRAWN = "review-withdrawn"
    OPINION_RECORDED = "opinion-recorded"
    DECISION_EPOCH_RUN = "decision-epoch-run"
    DECISION_TAKEN = "decision-taken"
    PRIVILEGED_DATA_ACCESSED = "privileged-data-accessed"


@dataclass(frozen=True)
class EventRecord:
    seq: int
    epoch: int
    kind: EventKind
    payload: Dict[str, Any] = field(default_factory=dict)


class EventLog:
    """Dense, append-only sequence of events starting at seq 1."""

    def __init__(self) -> None:
        self._records: List[EventRecord] = []

    @property
    def last_seq(self) -> int:
        return self._records[-1].seq if self._records else 0

    @property
    def records(self) -> Tuple[EventRecord, ...]:
        return tuple(self._records)

    def next_seq(self) -> int:
        return self.last_seq + 1

    def append(self, record: EventRecord) -> None:
        """
        Append one record.

        Raises:
            CorruptionError: If record.seq is not last seq + 1
        """
        expected = self.next_seq()
        if record.seq != expected:
            raise CorruptionError(
                f"expected seq {expected}, got {record.seq} (kind {record.kind.value})"
            )
        self._records.append(record)

    def since(self, seq: int) -> List[EventRecord]:
        """Records with seq strictly greater than ``seq``."""
        return self._records[seq:]

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self._records)

    def __getitem__(self, index: int) -> EventRecord:
        return self._records[index]


def append_event(log: EventLog, event: EventRecord) -> EventLog:
    """Append ``event`` to ``log`` and return the log."""
    log.append(event)
    return log
