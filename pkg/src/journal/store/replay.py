"""Deterministic replay of an event log into journal state."""

import logging
from collections import deque
from typing import Any, Deque, Dict, Iterable

from journal.core.errors import InvalidConfigError, ReplayError, VerificationError
from journal.core.journal import Journal, compute_decisions, label_summary
from journal.core.state import JournalState
from journal.decision.config import EngineConfig

from .events import EventKind, EventRecord

logger = logging.getLogger(__name__)


def replay(log: Iterable[EventRecord]) -> JournalState:
    """
    Fold a log into the state it describes.

    Recorded decisions are applied as recorded; nothing is recomputed.

    Raises:
        CorruptionError: On a sequence gap
        ReplayError: When a record cannot be applied (carries its seq)
    """
    return Journal.from_log(log).state


def _recorded_config(record: EventRecord) -> EngineConfig:
    try:
        return EngineConfig.from_dict(record.payload["config"])
    except (KeyError, TypeError, InvalidConfigError) as e:
        raise ReplayError(f"unreadable engine config: {e}", seq=record.seq) from e


def verify(log: Iterable[EventRecord]) -> str:
    """
    Replay a log, recomputing every decision epoch along the way.

    At each ``decision-epoch-run`` the decisions are recomputed from the
    state as it stood, with the recorded engine config, and compared with
    the ``decision-taken`` records that follow. The recorded label summary
    and training digest are checked against the same state.

    Args:
        log: Event records

    Returns:
        Digest of the final state

    Raises:
        VerificationError: If a recorded decision differs from the recomputed one
    """
    journal = Journal()
    pending: Deque[Dict[str, Any]] = deque()
    epochs = 0

    for record in log:
        if record.kind is EventKind.DECISION_TAKEN:
            if not pending:
                raise VerificationError(f"seq {record.seq}: decision without a matching decision epoch")
            expected = pending.popleft()
            if record.payload != expected:
                raise VerificationError(
                    f"seq {record.seq}: recorded decision {record.payload} differs from recomputed {expected}"
                )
        elif pending:
            raise VerificationError(
                f"seq {record.seq}: {len(pending)} recomputed decisions missing from the log "
                f"(next: {pending[0]['submission']})"
            )

        if record.kind is EventKind.DECISION_EPOCH_RUN:
            config = _recorded_config(record)
            if record.payload.get("config_digest") != config.digest():
                raise VerificationError(f"seq {record.seq}: config digest does not match the recorded config")
            if record.payload.get("labels") != label_summary(journal.state):
                raise VerificationError(f"seq {record.seq}: label summary differs from the recomputed one")
            training, decisions = compute_decisions(journal.state, record.epoch, config)
            if record.payload.get("training_digest") != training.digest():
                raise VerificationError(f"seq {record.seq}: training set digest differs from the recomputed one")
            pending.extend(d.to_payload() for d in decisions)
            epochs += 1

        journal.ingest(record)

    if pending:
        raise VerificationError(f"log ends with {len(pending)} recomputed decisions missing")

    digest = journal.digest()
    logger.info(f"Verified {len(journal.log)} records across {epochs} decision epochs")
    return digest
