"""Append-only event log persistence."""

from .codec import decode_record, encode_record, parse_log, serialize_log
from .events import EventKind, EventLog, EventRecord, append_event
from .journal_file import JournalFile

__all__ = [
    'EventKind',
    'EventLog',
    'EventRecord',
    'JournalFile',
    'append_event',
    'decode_record',
    'encode_record',
    'parse_log',
    'serialize_log',
]
