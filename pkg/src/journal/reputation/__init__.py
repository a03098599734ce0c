"""Reviewer reputation: precision, leaderboard and pseudo-reviewer identities."""

from .precision import PrecisionRecord, all_precisions, lead_reviewers, reviewer_precision
from .pseudo import (
    Facet,
    PseudoReviewerId,
    ReviewerKey,
    base_reviewer,
    effective_reviewer_id,
    parse_reviewer_key,
)

__all__ = [
    'Facet',
    'PrecisionRecord',
    'PseudoReviewerId',
    'ReviewerKey',
    'all_precisions',
    'base_reviewer',
    'effective_reviewer_id',
    'lead_reviewers',
    'parse_reviewer_key',
    'reviewer_precision',
]
