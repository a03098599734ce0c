"""Journal error hierarchy.

Every error carries a stable ``code`` that the CLI prints verbatim so scripts
can branch on it.
"""

from typing import Optional


class JournalError(Exception):
    """Base class for all domain errors."""

    code = "JOURNAL_ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return self.message


class InvalidInputError(JournalError):
    """Malformed vote, empty identifier or time running backwards."""
    code = "INVALID_INPUT"


class UnknownAccountError(JournalError):
    code = "UNKNOWN_ACCOUNT"


class DuplicateAccountError(JournalError):
    code = "DUPLICATE_ACCOUNT"


class UnknownSubmissionError(JournalError):
    code = "UNKNOWN_SUBMISSION"


class DecisionTakenError(JournalError):
    """Reviews may only change while a submission is open."""
    code = "DECISION_TAKEN"


class ArticleNotPublishedError(JournalError):
    code = "ARTICLE_NOT_PUBLISHED"


class NoReviewError(JournalError):
    code = "NO_REVIEW"


class ResubmissionError(JournalError):
    code = "INVALID_RESUBMISSION"


class NoDataError(JournalError):
    """An estimator was asked for a frequency with nothing to count."""
    code = "NO_DATA"


class InvalidConfigError(JournalError):
    code = "INVALID_CONFIG"


class CorruptionError(JournalError):
    """Event log sequence gap, regression or duplicate."""
    code = "LOG_CORRUPTION"


class ReplayError(JournalError):
    """An event could not be folded into the state."""

    code = "REPLAY_ERROR"

    def __init__(self, message: str, seq: Optional[int] = None):
        if seq is not None:
            message = f"seq {seq}: {message}"
        super().__init__(message)
        self.seq = seq


class VerificationError(JournalError):
    code = "VERIFY_MISMATCH"


class MetricsError(JournalError):
    code = "METRICS_MISMATCH"


class JournalLockedError(JournalError):
    code = "JOURNAL_LOCKED"


class JournalExistsError(JournalError):
    code = "JOURNAL_EXISTS"
