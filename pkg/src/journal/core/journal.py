"""Journal lifecycle state machine.

Submission -> review window -> decision -> publication -> ongoing rating.

A ``Journal`` is the single writer of a ``JournalState``. Every mutating
operation builds an event, folds it into the state through ``apply`` (which
validates before touching anything) and only then appends it to the log.
Replay folds a stored log through the very same ``apply``.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

from constants import ARTICLE_ID_PREFIX, SUBMISSION_ID_PREFIX
from journal.decision.classifier import Posterior, decide, posterior_acceptable
from journal.decision.config import ColdStart, EngineConfig
from journal.decision.training import (
    TrainingSet,
    build_training_set,
    review_vector_for,
    sorted_reviewers,
)
from journal.store.events import EventKind, EventLog, EventRecord
from utils.serialization import fraction_to_str, natural_key

from .errors import (
    ArticleNotPublishedError,
    CorruptionError,
    DecisionTakenError,
    DuplicateAccountError,
    InvalidInputError,
    JournalError,
    NoReviewError,
    ReplayError,
    ResubmissionError,
    UnknownAccountError,
    UnknownSubmissionError,
)
from .labels import current_labels
from .state import JournalState
from .types import (
    AccountId,
    ArticleId,
    DecisionBasis,
    Label,
    Outcome,
    ReaderOpinion,
    ReviewVote,
    Submission,
    SubmissionId,
    SubmissionStatus,
    check_binary,
    check_identifier,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecisionRecord:
    """Outcome of one due submission at a decision epoch, kept for audit."""
    submission: SubmissionId
    epoch: int
    status: SubmissionStatus
    basis: DecisionBasis
    review_count: int
    training_digest: str
    article: Optional[ArticleId] = None
    posterior: Optional[Posterior] = None
    eligible_reviewers: Tuple[str, ...] = ()

    @property
    def decision(self) -> str:
        """publish / reject / rejected-without-prejudice."""
        if self.status is SubmissionStatus.PUBLISHED:
            return Outcome.PUBLISH.value
        if self.status is SubmissionStatus.REJECTED:
            return Outcome.REJECT.value
        return self.status.value

    @property
    def degenerate(self) -> bool:
        return self.posterior is not None and self.posterior.degenerate

    def to_payload(self) -> Dict[str, Any]:
        return {
            "submission": self.submission,
            "status": self.status.value,
            "article": self.article,
            "basis": self.basis.value,
            "review_count": self.review_count,
            "posterior": fraction_to_str(self.posterior.exact) if self.posterior else None,
            "eligible": list(self.eligible_reviewers),
            "training_digest": self.training_digest,
            "degenerate": self.degenerate,
        }


def review_queue(state: JournalState, now: Optional[int] = None) -> List[SubmissionId]:
    """
    Open submissions, closest to their decision first.

    Ties on the due epoch break by submission epoch, then by id. ``now`` does
    not filter: every open submission is listed.
    """
    ordered = sorted(
        state.open_submissions(),
        key=lambda s: (s.decision_due_at, s.submitted_at, natural_key(s.id)),
    )
    return [s.id for s in ordered]


def label_summary(state: JournalState) -> Dict[str, int]:
    counts = {label.value: 0 for label in Label}
    for label in current_labels(state).values():
        counts[label.label.value] += 1
    return counts


def compute_decisions(
    state: JournalState,
    now: int,
    config: EngineConfig,
) -> Tuple[TrainingSet, List[DecisionRecord]]:
    """
    Decide every open submission due at or before ``now``.

    All decisions of one epoch use the training set as it stands when the
    epoch starts; the state is not modified.

    Args:
        state: Journal state
        now: Current epoch
        config: Engine configuration

    Returns:
        (training set, decision records in queue order)
    """
    training = build_training_set(state, config.pseudo_reviewers)
    digest = training.digest()
    next_article = state.next_article
    records: List[DecisionRecord] = []

    for submission_id in review_queue(state, now):
        submission = state.submissions[submission_id]
        if submission.decision_due_at > now:
            continue

        review_count = len(state.live_reviews(submission_id))
        if review_count < config.min_reviews:
            records.append(DecisionRecord(
                submission=submission_id,
                epoch=now,
                status=SubmissionStatus.REJECTED_WITHOUT_PREJUDICE,
                basis=DecisionBasis.INSUFFICIENT_REVIEWS,
                review_count=review_count,
                training_digest=digest,
            ))
            continue

        vector = review_vector_for(state, submission_id, config.pseudo_reviewers)
        posterior = posterior_acceptable(training, vector, config)

        if not posterior.eligible_reviewers and config.cold_start is ColdStart.REVIEW_MAJORITY:
            basis = DecisionBasis.COLD_START
            publish = 2 * sum(vector.entries.values()) > vector.m
        else:
            basis = DecisionBasis.CLASSIFIER
            publish = decide(posterior, config.threshold) is Outcome.PUBLISH

        article = None
        if publish:
            article = f"{ARTICLE_ID_PREFIX}{next_article}"
            next_article += 1

        records.append(DecisionRecord(
            submission=submission_id,
            epoch=now,
            status=SubmissionStatus.PUBLISHED if publish else SubmissionStatus.REJECTED,
            basis=basis,
            review_count=review_count,
            training_digest=digest,
            article=article,
            posterior=posterior,
            eligible_reviewers=tuple(str(r) for r in sorted_reviewers(posterior.eligible_reviewers)),
        ))

    return training, records


def _check_epoch(now: int) -> int:
    if isinstance(now, bool) or not isinstance(now, int) or now < 0:
        raise InvalidInputError(f"epoch must be a non-negative integer, got {now!r}")
    return now


class Journal:
    """Single-writer journal: state plus the log that produced it."""

    def __init__(self, config: Optional[EngineConfig] = None):
        self.config = config or EngineConfig()
        self.state = JournalState()
        self.log = EventLog()

    # ------------------------------------------------------------------
    # Replay
    # ------------------------------------------------------------------

    @classmethod
    def from_log(cls, records: Iterable[EventRecord], config: Optional[EngineConfig] = None) -> "Journal":
        """
        Rebuild a journal by folding stored records.

        Raises:
            CorruptionError: On a sequence gap or regression
            ReplayError: When a record cannot be applied (carries its seq)
        """
        journal = cls(config)
        for record in records:
            journal.ingest(record)
        return journal

    def ingest(self, record: EventRecord) -> None:
        """Apply a stored record and append it to the log."""
        if record.seq != self.log.next_seq():
            raise CorruptionError(f"expected seq {self.log.next_seq()}, got {record.seq}")
        try:
            self.apply(record)
        except ReplayError:
            raise
        except JournalError as e:
            raise ReplayError(f"{e.code}: {e}", seq=record.seq) from e
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise ReplayError(f"payload schema violation in {record.kind.value}: {e!r}", seq=record.seq) from e
        self.log.append(record)

    def apply(self, record: EventRecord) -> None:
        """
        Fold one event into the state.

        Every check runs before the first mutation, so a rejected event
        leaves the state untouched.
        """
        if record.epoch < self.state.epoch:
            raise InvalidInputError(
                f"epoch {record.epoch} is before the journal's current epoch {self.state.epoch}"
            )
        handler = self._handlers()[record.kind]
        handler(record.payload, record.epoch)
        self.state.epoch = record.epoch
        logger.debug(f"applied #{record.seq} {record.kind.value} @ {record.epoch}")

    def _handlers(self):
        return {
            EventKind.ACCOUNT_CREATED: self._on_account_created,
            EventKind.SUBMITTED: self._on_submitted,
            EventKind.REVIEW_RECORDED: self._on_review_recorded,
            EventKind.REVIEW_WITHDRAWN: self._on_review_withdrawn,
            EventKind.OPINION_RECORDED: self._on_opinion_recorded,
            EventKind.DECISION_EPOCH_RUN: self._on_decision_epoch_run,
            EventKind.DECISION_TAKEN: self._on_decision_taken,
            EventKind.PRIVILEGED_DATA_ACCESSED: self._on_privileged_access,
        }

    # ------------------------------------------------------------------
    # Event handlers
    # ------------------------------------------------------------------

    def _require_account(self, account: AccountId) -> AccountId:
        if account not in self.state.accounts:
            raise UnknownAccountError(f"Unknown account: {account}")
        return account

    def _require_open(self, submission_id: SubmissionId) -> Submission:
        submission = self.state.submissions.get(submission_id)
        if submission is None:
            raise UnknownSubmissionError(f"Unknown submission: {submission_id}")
        if submission.status.is_terminal:
            raise DecisionTakenError(
                f"Decision already taken on {submission_id} ({submission.status.value})"
            )
        return submission

    def _on_account_created(self, payload: Dict[str, Any], epoch: int) -> None:
        account = check_identifier(payload["account"], "account")
        if account in self.state.accounts:
            raise DuplicateAccountError(f"Account already exists: {account}")
        self.state.accounts[account] = epoch

    def _on_submitted(self, payload: Dict[str, Any], epoch: int) -> None:
        submission_id = payload["submission"]
        expected = f"{SUBMISSION_ID_PREFIX}{self.state.next_submission}"
        if submission_id != expected:
            raise InvalidInputError(f"expected submission id {expected}, got {submission_id}")
        author = self._require_account(payload["author"])
        due = payload["decision_due_at"]
        if isinstance(due, bool) or not isinstance(due, int) or due < epoch:
            raise InvalidInputError(f"decision_due_at {due!r} precedes submission epoch {epoch}")

        predecessor = payload.get("predecessor")
        if predecessor is not None:
            previous = self.state.submissions.get(predecessor)
            if previous is None:
                raise UnknownSubmissionError(f"Unknown submission: {predecessor}")
            if previous.status is not SubmissionStatus.REJECTED_WITHOUT_PREJUDICE:
                raise ResubmissionError(
                    f"{predecessor} is {previous.status.value}; only submissions rejected "
                    f"without prejudice can be resubmitted"
                )
            if any(s.predecessor == predecessor for s in self.state.submissions.values()):
                raise ResubmissionError(f"{predecessor} has already been resubmitted")
            if previous.author != author:
                raise ResubmissionError(f"{predecessor} was submitted by another author")

        self.state.submissions[submission_id] = Submission(
            id=submission_id,
            author=author,
            submitted_at=epoch,
            decision_due_at=due,
            predecessor=predecessor,
            url=payload.get("url"),
        )
        self.state.next_submission += 1

    def _on_review_recorded(self, payload: Dict[str, Any], epoch: int) -> None:
        submission = self._require_open(payload["submission"])
        reviewer = self._require_account(payload["reviewer"])
        vote = check_binary(payload["vote"], "vote")
        self.state.reviews.setdefault(submission.id, {})[reviewer] = ReviewVote(
            submission=submission.id, reviewer=reviewer, vote=vote, recorded_at=epoch,
        )

    def _on_review_withdrawn(self, payload: Dict[str, Any], epoch: int) -> None:
        submission = self._require_open(payload["submission"])
        reviewer = payload["reviewer"]
        live = self.state.reviews.get(submission.id, {})
        if reviewer not in live:
            raise NoReviewError(f"{reviewer} has no live review on {submission.id}")
        del live[reviewer]

    def _on_opinion_recorded(self, payload: Dict[str, Any], epoch: int) -> None:
        article = payload["article"]
        if article not in self.state.articles:
            raise ArticleNotPublishedError(f"Article is not published: {article}")
        reader = self._require_account(payload["reader"])
        opinion = check_binary(payload["opinion"], "opinion")

        submission = self.state.submission_of(article)
        review = self.state.live_reviews(submission.id).get(reader)
        inconsistent = review is not None and review.vote != opinion
        if inconsistent:
            logger.info(f"{reader} rated {article} against their own review")

        self.state.opinions.setdefault(article, {})[reader] = ReaderOpinion(
            article=article, reader=reader, opinion=opinion,
            recorded_at=epoch, inconsistent=inconsistent,
        )

    def _on_decision_epoch_run(self, payload: Dict[str, Any], epoch: int) -> None:
        config = EngineConfig.from_dict(payload["config"])
        self.state.labels = current_labels(self.state)
        self.state.config = config.to_dict()

    def _on_decision_taken(self, payload: Dict[str, Any], epoch: int) -> None:
        submission = self._require_open(payload["submission"])
        status = SubmissionStatus(payload["status"])
        if not status.is_terminal:
            raise InvalidInputError("a decision must move the submission to a terminal status")
        if epoch < submission.decision_due_at:
            raise InvalidInputError(
                f"{submission.id} is not due until epoch {submission.decision_due_at}"
            )

        article = payload.get("article")
        if status is SubmissionStatus.PUBLISHED:
            expected = f"{ARTICLE_ID_PREFIX}{self.state.next_article}"
            if article != expected:
                raise InvalidInputError(f"expected article id {expected}, got {article}")
            self.state.articles[article] = submission.id
            self.state.next_article += 1
            submission.article = article
        elif article is not None:
            raise InvalidInputError(f"{status.value} submission cannot carry an article id")
        submission.status = status

    def _on_privileged_access(self, payload: Dict[str, Any], epoch: int) -> None:
        check_identifier(payload["agent"], "agent")
        check_identifier(payload["submission"], "submission")

    # ------------------------------------------------------------------
    # Operations
    # ------------------------------------------------------------------

    def _emit(self, kind: EventKind, now: int, payload: Dict[str, Any]) -> EventRecord:
        record = EventRecord(seq=self.log.next_seq(), epoch=_check_epoch(now), kind=kind, payload=payload)
        self.apply(record)
        self.log.append(record)
        return record

    def register_account(self, account: AccountId, now: int) -> None:
        self._emit(EventKind.ACCOUNT_CREATED, now, {"account": account})

    def submit_article(
        self,
        author: AccountId,
        now: int,
        url: Optional[str] = None,
        review_window: Optional[int] = None,
        predecessor: Optional[SubmissionId] = None,
    ) -> SubmissionId:
        """
        Open a new submission due ``review_window`` epochs from now.

        Args:
            author: Registered author account
            now: Current epoch
            url: Opaque pointer to the article content
            review_window: Overrides the journal's configured window
            predecessor: Submission being resubmitted, if any

        Returns:
            The new submission id

        Raises:
            UnknownAccountError: If the author is not registered
        """
        window = self.config.review_window if review_window is None else review_window
        if isinstance(window, bool) or not isinstance(window, int) or window < 0:
            raise InvalidInputError(f"review window must be a non-negative integer, got {window!r}")
        submission_id = f"{SUBMISSION_ID_PREFIX}{self.state.next_submission}"
        self._emit(EventKind.SUBMITTED, now, {
            "submission": submission_id,
            "author": author,
            "decision_due_at": _check_epoch(now) + window,
            "predecessor": predecessor,
            "url": url,
        })
        logger.info(f"{author} submitted {submission_id} at epoch {now}")
        return submission_id

    def resubmit_article(self, predecessor: SubmissionId, now: int, url: Optional[str] = None) -> SubmissionId:
        """Resubmit a submission that was rejected without prejudice."""
        previous = self.state.submissions.get(predecessor)
        if previous is None:
            raise UnknownSubmissionError(f"Unknown submission: {predecessor}")
        return self.submit_article(
            previous.author, now, url=url if url is not None else previous.url, predecessor=predecessor,
        )

    def record_review(self, submission: SubmissionId, reviewer: AccountId, vote: int, now: int) -> None:
        """Record or replace a reviewer's vote on an open submission."""
        self._emit(EventKind.REVIEW_RECORDED, now, {
            "submission": submission, "reviewer": reviewer, "vote": vote,
        })

    def withdraw_review(self, submission: SubmissionId, reviewer: AccountId, now: int) -> None:
        self._emit(EventKind.REVIEW_WITHDRAWN, now, {"submission": submission, "reviewer": reviewer})

    def record_opinion(self, article: ArticleId, reader: AccountId, opinion: int, now: int) -> ReaderOpinion:
        """
        Record or replace a reader's opinion of a published article.

        Returns:
            The stored opinion, with its inconsistency flag
        """
        self._emit(EventKind.OPINION_RECORDED, now, {
            "article": article, "reader": reader, "opinion": opinion,
        })
        return self.state.opinions[article][reader]

    def record_privileged_access(self, agent: AccountId, submission: SubmissionId, now: int) -> None:
        self._emit(EventKind.PRIVILEGED_DATA_ACCESSED, now, {"agent": agent, "submission": submission})

    def review_queue(self, now: Optional[int] = None) -> List[SubmissionId]:
        return review_queue(self.state, now)

    def run_decision_epoch(self, now: int, config: Optional[EngineConfig] = None) -> List[DecisionRecord]:
        """
        Relabel, retrain and decide every due submission.

        Args:
            now: Current epoch
            config: Engine configuration (defaults to the journal's)

        Returns:
            Decision records in queue order
        """
        config = (config or self.config).validate()
        _check_epoch(now)
        if now < self.state.epoch:
            raise InvalidInputError(f"epoch {now} is before the journal's current epoch {self.state.epoch}")

        training, records = compute_decisions(self.state, now, config)
        self._emit(EventKind.DECISION_EPOCH_RUN, now, {
            "now": now,
            "config": config.to_dict(),
            "config_digest": config.digest(),
            "training_digest": training.digest(),
            "labels": label_summary(self.state),
        })
        for record in records:
            self._emit(EventKind.DECISION_TAKEN, now, record.to_payload())

        published = sum(1 for r in records if r.status is SubmissionStatus.PUBLISHED)
        logger.info(
            f"Epoch {now}: {len(records)} decisions ({published} published), "
            f"training set of {len(training)} articles"
        )
        return records

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def snapshot(self) -> JournalState:
        """Independent copy of the current state for read-only sharing."""
        return self.state.copy()

    def digest(self) -> str:
        return self.state.digest()
