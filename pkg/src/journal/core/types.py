"""Domain types for the journal lifecycle."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import InvalidInputError

# Opaque identifiers. An account id doubles as author, reviewer and reader id.
AccountId = str
ReviewerId = str
ReaderId = str
SubmissionId = str
ArticleId = str


class SubmissionStatus(Enum):
    OPEN = "open"
    PUBLISHED = "published"
    REJECTED = "rejected"
    REJECTED_WITHOUT_PREJUDICE = "rejected-without-prejudice"

    @property
    def is_terminal(self) -> bool:
        return self is not SubmissionStatus.OPEN


class Label(Enum):
    ACCEPTABLE = "acceptable"
    UNACCEPTABLE = "unacceptable"
    UNLABELED = "unlabeled"


class Outcome(Enum):
    """Classifier verdict for a submission with enough reviews."""
    PUBLISH = "publish"
    REJECT = "reject"


class DecisionBasis(Enum):
    CLASSIFIER = "classifier"
    COLD_START = "cold-start"
    INSUFFICIENT_REVIEWS = "insufficient-reviews"


def check_binary(value: int, what: str) -> int:
    """Validate a 0/1 vote or opinion.

    Raises:
        InvalidInputError: If value is not 0 or 1
    """
    if isinstance(value, bool) or value not in (0, 1):
        raise InvalidInputError(f"{what} must be 0 or 1, got {value!r}")
    return int(value)


def check_identifier(value: str, what: str) -> str:
    """Validate a non-empty opaque identifier."""
    if not isinstance(value, str) or not value.strip():
        raise InvalidInputError(f"{what} must be a non-empty string")
    return value


@dataclass(frozen=True)
class ReviewVote:
    """A pre-decision accept (1) / reject (0) recommendation."""
    submission: SubmissionId
    reviewer: ReviewerId
    vote: int
    recorded_at: int


@dataclass(frozen=True)
class ReaderOpinion:
    """A post-publication acceptable (1) / unacceptable (0) rating."""
    article: ArticleId
    reader: ReaderId
    opinion: int
    recorded_at: int
    inconsistent: bool = False  # reader reviewed the article and voted the other way


@dataclass
class Submission:
    id: SubmissionId
    author: AccountId
    submitted_at: int
    decision_due_at: int
    status: SubmissionStatus = SubmissionStatus.OPEN
    article: Optional[ArticleId] = None
    predecessor: Optional[SubmissionId] = None
    url: Optional[str] = None


@dataclass(frozen=True)
class MajorityLabel:
    article: ArticleId
    n: int
    positives: int
    label: Label

    @property
    def is_labeled(self) -> bool:
        return self.label is not Label.UNLABELED
