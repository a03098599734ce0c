"""Journal domain types, state and labeling."""

from .errors import JournalError
from .labels import current_labels, tally_majority
from .state import JournalState
from .types import (
    DecisionBasis,
    Label,
    MajorityLabel,
    Outcome,
    ReaderOpinion,
    ReviewVote,
    Submission,
    SubmissionStatus,
)

__all__ = [
    'DecisionBasis',
    'JournalError',
    'JournalState',
    'Label',
    'MajorityLabel',
    'Outcome',
    'ReaderOpinion',
    'ReviewVote',
    'Submission',
    'SubmissionStatus',
    'current_labels',
    'tally_majority',
]
