"""Reviewer precision and the lead-reviewer leaderboard."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from journal.core.errors import InvalidInputError
from journal.core.labels import current_labels
from journal.core.state import JournalState
from journal.core.types import Label, SubmissionStatus
from utils.serialization import natural_key

from .pseudo import ReviewerKey, effective_reviewer_id

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrecisionRecord:
    """Accept recommendations scored against reader-majority labels.

    Only accept votes are observable outcomes: a rejected submission is never
    read, so false negatives cannot be counted.
    """
    reviewer: ReviewerKey
    tp: int = 0  # accepted, published, labeled acceptable
    fp: int = 0  # accepted, published, labeled unacceptable

    @property
    def rated(self) -> int:
        return self.tp + self.fp

    @property
    def precision(self) -> Optional[Fraction]:
        if self.rated == 0:
            return None
        return Fraction(self.tp, self.rated)


def all_precisions(state: JournalState, pseudo_reviewers: bool = False) -> Dict[ReviewerKey, PrecisionRecord]:
    """
    Precision of every reviewer with at least one live review.

    Labels are tallied from the live opinions at call time.

    Args:
        state: Journal state
        pseudo_reviewers: Score the self-work and others-work facets separately

    Returns:
        Effective reviewer id -> PrecisionRecord
    """
    labels = current_labels(state)
    counts: Dict[ReviewerKey, List[int]] = {}

    for submission_id, reviews in state.reviews.items():
        submission = state.submissions[submission_id]
        label = None
        if submission.status is SubmissionStatus.PUBLISHED and submission.article is not None:
            label = labels[submission.article].label

        for reviewer, review in reviews.items():
            key = effective_reviewer_id(reviewer, submission.author, pseudo_reviewers)
            tally = counts.setdefault(key, [0, 0])
            if review.vote != 1 or label is None or label is Label.UNLABELED:
                continue
            tally[0 if label is Label.ACCEPTABLE else 1] += 1

    return {key: PrecisionRecord(reviewer=key, tp=tp, fp=fp) for key, (tp, fp) in counts.items()}


def reviewer_precision(
    state: JournalState,
    reviewer: ReviewerKey,
    pseudo_reviewers: bool = False,
) -> PrecisionRecord:
    """Precision of one (effective) reviewer; undefined when nothing is rated."""
    return all_precisions(state, pseudo_reviewers).get(reviewer, PrecisionRecord(reviewer=reviewer))


def lead_reviewers(
    state: JournalState,
    k: int,
    min_rated: int = 1,
    pseudo_reviewers: bool = False,
) -> List[Tuple[ReviewerKey, PrecisionRecord]]:
    """
    Rank reviewers by precision.

    Reviewers with undefined precision or fewer than ``min_rated`` rated
    accepts are left out. Ties break on the rated count (higher first), then
    on the id.

    Args:
        state: Journal state
        k: Maximum number of entries
        min_rated: Minimum tp + fp to be listed
        pseudo_reviewers: Rank facets instead of accounts

    Returns:
        Up to k (reviewer, record) pairs, best first

    Raises:
        InvalidInputError: If k is negative
    """
    if k < 0:
        raise InvalidInputError(f"k must be >= 0, got {k}")

    ranked = [
        (key, record)
        for key, record in all_precisions(state, pseudo_reviewers).items()
        if record.precision is not None and record.rated >= max(min_rated, 1)
    ]
    ranked.sort(key=lambda item: (-item[1].precision, -item[1].rated, natural_key(item[0])))
    logger.debug(f"{len(ranked)} reviewers qualify for the leaderboard (min_rated={min_rated})")
    return ranked[:k]
