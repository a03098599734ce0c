"""Journal state derived from the event log."""

import copy
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from utils.serialization import natural_key, sha256_digest

from .types import (
    AccountId,
    ArticleId,
    MajorityLabel,
    ReaderId,
    ReaderOpinion,
    ReviewerId,
    ReviewVote,
    Submission,
    SubmissionId,
    SubmissionStatus,
)


@dataclass
class JournalState:
    """Everything the journal knows, as folded from its events.

    Only ``Journal.apply`` mutates a state; everyone else treats it as a
    read-only value (``copy()`` gives an independent snapshot).
    """
    accounts: Dict[AccountId, int] = field(default_factory=dict)  # account -> epoch registered
    submissions: Dict[SubmissionId, Submission] = field(default_factory=dict)
    reviews: Dict[SubmissionId, Dict[ReviewerId, ReviewVote]] = field(default_factory=dict)
    opinions: Dict[ArticleId, Dict[ReaderId, ReaderOpinion]] = field(default_factory=dict)
    articles: Dict[ArticleId, SubmissionId] = field(default_factory=dict)
    labels: Dict[ArticleId, MajorityLabel] = field(default_factory=dict)  # last epoch's tally
    epoch: int = 0
    config: Optional[Dict[str, Any]] = None  # engine config of the last decision epoch
    next_submission: int = 1
    next_article: int = 1

    def copy(self) -> "JournalState":
        return copy.deepcopy(self)

    def live_reviews(self, submission: SubmissionId) -> Dict[ReviewerId, ReviewVote]:
        return self.reviews.get(submission, {})

    def published_articles(self) -> List[ArticleId]:
        """Published article ids in natural order."""
        return sorted(self.articles, key=natural_key)

    def submission_of(self, article: ArticleId) -> Submission:
        return self.submissions[self.articles[article]]

    def open_submissions(self) -> List[Submission]:
        return [s for s in self.submissions.values() if s.status is SubmissionStatus.OPEN]

    def canonical(self) -> Dict[str, Any]:
        """JSON-able mapping with a single canonical encoding."""
        return {
            "accounts": dict(self.accounts),
            "submissions": {
                sid: {
                    "author": s.author,
                    "submitted_at": s.submitted_at,
                    "decision_due_at": s.decision_due_at,
                    "status": s.status.value,
                    "article": s.article,
                    "predecessor": s.predecessor,
                    "url": s.url,
                }
                for sid, s in self.submissions.items()
            },
            "reviews": {
                sid: {r: [v.vote, v.recorded_at] for r, v in votes.items()}
                for sid, votes in self.reviews.items()
                if votes
            },
            "opinions": {
                aid: {r: [o.opinion, o.recorded_at, o.inconsistent] for r, o in ops.items()}
                for aid, ops in self.opinions.items()
                if ops
            },
            "articles": dict(self.articles),
            "labels": {
                aid: [lab.n, lab.positives, lab.label.value]
                for aid, lab in self.labels.items()
            },
            "epoch": self.epoch,
            "config": self.config,
            "next_submission": self.next_submission,
            "next_article": self.next_article,
        }

    def digest(self) -> str:
        """SHA-256 over the canonical serialization."""
        return sha256_digest(self.canonical())
