"""Author/other pseudo-reviewer identity split."""

from dataclasses import dataclass
from enum import Enum
from typing import Union

from journal.core.types import AccountId, ReviewerId

FACET_SEPARATOR = "@"


class Facet(Enum):
    SELF_WORK = "self-work"
    OTHERS_WORK = "others-work"


@dataclass(frozen=True)
class PseudoReviewerId:
    """One facet of a reviewer, scored independently of the other."""
    base: ReviewerId
    facet: Facet

    def __str__(self) -> str:
        return f"{self.base}{FACET_SEPARATOR}{self.facet.value}"


# Everything that trains, gates or ranks keys on this.
ReviewerKey = Union[ReviewerId, PseudoReviewerId]


def effective_reviewer_id(
    reviewer: ReviewerId,
    submission_author: AccountId,
    pseudo_enabled: bool,
) -> ReviewerKey:
    """
    Map a reviewer to the identity their vote is scored under.

    Args:
        reviewer: Base reviewer account
        submission_author: Author of the reviewed submission
        pseudo_enabled: Whether the self/others split is active

    Returns:
        The base id when disabled, otherwise the facet for this review
    """
    if not pseudo_enabled:
        return reviewer
    facet = Facet.SELF_WORK if reviewer == submission_author else Facet.OTHERS_WORK
    return PseudoReviewerId(base=reviewer, facet=facet)


def parse_reviewer_key(text: str) -> ReviewerKey:
    """Parse "R1" or "R1@self-work" as printed by the CLI."""
    base, sep, facet = text.rpartition(FACET_SEPARATOR)
    if sep and base:
        try:
            return PseudoReviewerId(base=base, facet=Facet(facet))
        except ValueError:
            pass
    return text


def base_reviewer(key: ReviewerKey) -> ReviewerId:
    return key.base if isinstance(key, PseudoReviewerId) else key
