"""JSON Lines encoding of event records.

One record per line, UTF-8, keys in a fixed order:
``seq``, ``schema_version`` (record 1 only), ``epoch``, ``kind``, ``payload``.
Posteriors inside payloads are exact "num/den" strings, never floats.
"""

import json
import logging
from typing import Any, Dict, Iterable, List

from constants import SCHEMA_VERSION
from journal.core.errors import ReplayError

from .events import EventKind, EventLog, EventRecord

logger = logging.getLogger(__name__)


def encode_record(record: EventRecord) -> str:
    """Encode one record as a single JSON line (no trailing newline)."""
    data: Dict[str, Any] = {"seq": record.seq}
    if record.seq == 1:
        data["schema_version"] = SCHEMA_VERSION
    data["epoch"] = record.epoch
    data["kind"] = record.kind.value
    data["payload"] = record.payload
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"))


def decode_record(line: str, line_number: int = 0) -> EventRecord:
    """
    Decode one JSON line.

    Args:
        line: Encoded record
        line_number: 1-based line for error messages

    Returns:
        EventRecord

    Raises:
        ReplayError: On malformed JSON, unknown kind or schema violation
    """
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise ReplayError(f"line {line_number}: invalid JSON: {e}") from e

    if not isinstance(data, dict):
        raise ReplayError(f"line {line_number}: record is not an object")

    seq = data.get("seq")
    try:
        if not isinstance(seq, int) or isinstance(seq, bool):
            raise ValueError("seq must be an integer")
        if seq == 1 and data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported schema_version {data.get('schema_version')!r} "
                f"(expected {SCHEMA_VERSION})"
            )
        epoch = data["epoch"]
        if not isinstance(epoch, int) or isinstance(epoch, bool) or epoch < 0:
            raise ValueError("epoch must be a non-negative integer")
        kind = EventKind(data["kind"])
        payload = data["payload"]
        if not isinstance(payload, dict):
            raise ValueError("payload must be an object")
    except (KeyError, ValueError) as e:
        raise ReplayError(f"line {line_number}: {e}", seq=seq if isinstance(seq, int) else None) from e

    return EventRecord(seq=seq, epoch=epoch, kind=kind, payload=payload)


def encode_log(records: Iterable[EventRecord]) -> List[str]:
    return [encode_record(r) for r in records]


def serialize_log(log: Iterable[EventRecord]) -> str:
    """Whole log as text, one line per record with trailing newlines."""
    return "".join(line + "\n" for line in encode_log(log))


def parse_log(text: str) -> EventLog:
    """
    Parse JSON Lines text into a validated EventLog.

    Blank lines are ignored. Sequence gaps raise CorruptionError.
    """
    log = EventLog()
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        log.append(decode_record(line, number))
    logger.debug(f"Parsed {len(log)} records")
    return log
