"""Training-set construction and reviewer eligibility."""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Tuple

from journal.core.labels import current_labels
from journal.core.state import JournalState
from journal.core.types import ArticleId, Label
from journal.reputation.pseudo import ReviewerKey, effective_reviewer_id
from utils.serialization import natural_key, sha256_digest


@dataclass(frozen=True)
class ClassHistory:
    """One reviewer's past votes, split by the article's label."""
    acceptable: Tuple[int, ...] = ()
    unacceptable: Tuple[int, ...] = ()

    def for_label(self, label: Label) -> Tuple[int, ...]:
        return self.acceptable if label is Label.ACCEPTABLE else self.unacceptable


@dataclass(frozen=True)
class ReviewVector:
    """A submission's live votes, keyed by effective reviewer id."""
    entries: Mapping[ReviewerKey, int] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.entries)


@dataclass
class TrainingSet:
    """Labeled published articles and the votes their reviewers cast.

    ``review_counts`` also covers published articles nobody has rated yet,
    since eligibility counts reviews of any published article.
    """
    rows: List[Tuple[ArticleId, Label]] = field(default_factory=list)
    votes: Dict[ArticleId, Dict[ReviewerKey, int]] = field(default_factory=dict)
    review_counts: Dict[ReviewerKey, int] = field(default_factory=dict)
    _histories: Dict[ReviewerKey, ClassHistory] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        acc: Dict[ReviewerKey, List[int]] = defaultdict(list)
        unacc: Dict[ReviewerKey, List[int]] = defaultdict(list)
        for article, label in self.rows:
            bucket = acc if label is Label.ACCEPTABLE else unacc
            for reviewer, vote in self.votes.get(article, {}).items():
                bucket[reviewer].append(vote)
        for reviewer in set(acc) | set(unacc):
            self._histories[reviewer] = ClassHistory(
                acceptable=tuple(acc.get(reviewer, ())),
                unacceptable=tuple(unacc.get(reviewer, ())),
            )

    @classmethod
    def from_rows(
        cls,
        rows: List[Tuple[ArticleId, Label]],
        votes: Dict[ArticleId, Dict[ReviewerKey, int]],
    ) -> "TrainingSet":
        """Build from labeled rows alone; review counts come from those rows."""
        counts: Dict[ReviewerKey, int] = defaultdict(int)
        for article, _ in rows:
            for reviewer in votes.get(article, {}):
                counts[reviewer] += 1
        return cls(rows=list(rows), votes=votes, review_counts=dict(counts))

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def acceptable_count(self) -> int:
        return sum(1 for _, label in self.rows if label is Label.ACCEPTABLE)

    def history(self, reviewer: ReviewerKey) -> ClassHistory:
        return self._histories.get(reviewer, ClassHistory())

    def canonical(self) -> Dict[str, Any]:
        return {
            "rows": [[article, label.value] for article, label in self.rows],
            "votes": {
                article: {str(r): v for r, v in votes.items()}
                for article, votes in self.votes.items()
            },
            "review_counts": {str(r): n for r, n in self.review_counts.items()},
        }

    def digest(self) -> str:
        return sha256_digest(self.canonical())


def build_training_set(state: JournalState, pseudo_reviewers: bool = False) -> TrainingSet:
    """
    Build the training set from the currently published articles.

    Each article is labeled by tallying its live reader opinions; articles
    nobody has rated are left out of the rows but still count towards
    reviewer eligibility.

    Args:
        state: Journal state
        pseudo_reviewers: Key votes on the self/others facet of each reviewer

    Returns:
        TrainingSet in natural article order
    """
    labels = current_labels(state)
    rows: List[Tuple[ArticleId, Label]] = []
    votes: Dict[ArticleId, Dict[ReviewerKey, int]] = {}
    counts: Dict[ReviewerKey, int] = defaultdict(int)

    for article in state.published_articles():
        submission = state.submission_of(article)
        keyed = {
            effective_reviewer_id(reviewer, submission.author, pseudo_reviewers): review.vote
            for reviewer, review in state.live_reviews(submission.id).items()
        }
        for reviewer in keyed:
            counts[reviewer] += 1

        label = labels[article]
        if label.is_labeled:
            rows.append((article, label.label))
            votes[article] = keyed

    return TrainingSet(rows=rows, votes=votes, review_counts=dict(counts))


def review_vector_for(
    state: JournalState,
    submission_id: str,
    pseudo_reviewers: bool = False,
) -> ReviewVector:
    """Collect a submission's live votes under effective reviewer ids."""
    submission = state.submissions[submission_id]
    return ReviewVector(entries={
        effective_reviewer_id(reviewer, submission.author, pseudo_reviewers): review.vote
        for reviewer, review in state.live_reviews(submission_id).items()
    })


def eligible_reviewers(
    training: TrainingSet,
    review_vector: ReviewVector,
    min_prior_reviews: int,
) -> FrozenSet[ReviewerKey]:
    """
    Reviewers of this submission whose votes may contribute factors.

    Args:
        training: Current training set
        review_vector: The submission's votes
        min_prior_reviews: Reviews on published articles required

    Returns:
        Set of eligible reviewer keys
    """
    return frozenset(
        reviewer for reviewer in review_vector.entries
        if training.review_counts.get(reviewer, 0) >= min_prior_reviews
    )


def sorted_reviewers(reviewers: Any) -> List[ReviewerKey]:
    """Reviewer keys in a stable, printable order."""
    return sorted(reviewers, key=natural_key)
