"""
Tests for the journal lifecycle: submissions, reviews, reader opinions,
decision epochs and resubmission.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from journal.core.errors import (
    ArticleNotPublishedError,
    DecisionTakenError,
    DuplicateAccountError,
    InvalidInputError,
    NoReviewError,
    ResubmissionError,
    UnknownAccountError,
    UnknownSubmissionError,
)
from journal.core.journal import Journal, compute_decisions, label_summary, review_queue
from journal.core.labels import current_labels, tally_majority
from journal.core.types import DecisionBasis, Label, SubmissionStatus
from journal.decision.config import ColdStart, EngineConfig
from journal.store.events import EventKind

from tests.journals import engine_configs, run_script, scripts


def _journal(**overrides) -> Journal:
    """Author AU, reviewers R1-R3 and readers U1-U3, all registered at epoch 0."""
    options = dict(min_prior_reviews=1, review_window=1, cold_start=ColdStart.REVIEW_MAJORITY)
    options.update(overrides)
    journal = Journal(EngineConfig(**options))
    for account in ["AU", "R1", "R2", "R3", "U1", "U2", "U3"]:
        journal.register_account(account, 0)
    return journal


def _published(journal: Journal) -> Journal:
    """S1 published as A1 at epoch 1 on a 2-1 review majority."""
    journal.submit_article("AU", 0)
    journal.record_review("S1", "R1", 1, 0)
    journal.record_review("S1", "R2", 1, 0)
    journal.record_review("S1", "R3", 0, 0)
    journal.run_decision_epoch(1)
    return journal


class TestTallyMajority:
    """Reader-majority labels."""

    def test_strict_majority_is_acceptable(self):
        label = tally_majority([1, 1, 0], "A1")
        assert label.label is Label.ACCEPTABLE
        assert (label.n, label.positives) == (3, 2)

    def test_tie_is_unacceptable(self):
        assert tally_majority([1, 0]).label is Label.UNACCEPTABLE
        assert tally_majority([1, 1, 0, 0]).label is Label.UNACCEPTABLE

    def test_no_opinions_is_unlabeled(self):
        label = tally_majority([])
        assert label.label is Label.UNLABELED
        assert not label.is_labeled

    def test_rejects_non_binary(self):
        with pytest.raises(InvalidInputError):
            tally_majority([1, 2])
        with pytest.raises(InvalidInputError):
            tally_majority([True])

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=30))
    @settings(max_examples=500)
    def test_acceptable_iff_more_than_half(self, opinions):
        label = tally_majority(opinions)
        assert (label.label is Label.ACCEPTABLE) == (2 * sum(opinions) > len(opinions))


class TestAccountsAndSubmissions:
    """Registration and submission bookkeeping."""

    def test_submission_ids_are_sequential(self):
        journal = _journal()
        assert journal.submit_article("AU", 0) == "S1"
        assert journal.submit_article("AU", 0) == "S2"
        assert journal.state.submissions["S2"].decision_due_at == 1

    def test_review_window_override(self):
        journal = _journal()
        sid = journal.submit_article("AU", 2, url="https://example.org/a.pdf", review_window=5)
        submission = journal.state.submissions[sid]
        assert submission.decision_due_at == 7
        assert submission.url == "https://example.org/a.pdf"

    def test_unknown_author(self):
        with pytest.raises(UnknownAccountError):
            _journal().submit_article("ghost", 0)

    def test_duplicate_account(self):
        with pytest.raises(DuplicateAccountError):
            _journal().register_account("R1", 0)

    def test_empty_identifier(self):
        with pytest.raises(InvalidInputError):
            _journal().register_account("  ", 0)

    def test_time_cannot_run_backwards(self):
        journal = _journal()
        journal.submit_article("AU", 3)
        with pytest.raises(InvalidInputError):
            journal.submit_article("AU", 2)
        with pytest.raises(InvalidInputError):
            journal.run_decision_epoch(1)

    def test_rejected_operation_leaves_journal_untouched(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        before = (journal.digest(), len(journal.log))
        with pytest.raises(UnknownAccountError):
            journal.record_review("S1", "ghost", 1, 0)
        with pytest.raises(InvalidInputError):
            journal.record_review("S1", "R1", 2, 0)
        assert (journal.digest(), len(journal.log)) == before


class TestReviews:
    """Reviews are upserted and withdrawable while a submission is open."""

    def test_rerecording_replaces_the_vote(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        journal.record_review("S1", "R1", 1, 0)
        journal.record_review("S1", "R1", 0, 0)
        live = journal.state.live_reviews("S1")
        assert len(live) == 1
        assert live["R1"].vote == 0

    def test_withdraw(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        journal.record_review("S1", "R1", 1, 0)
        journal.withdraw_review("S1", "R1", 0)
        assert journal.state.live_reviews("S1") == {}

    def test_withdraw_without_review(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        with pytest.raises(NoReviewError):
            journal.withdraw_review("S1", "R1", 0)

    def test_unknown_submission(self):
        with pytest.raises(UnknownSubmissionError):
            _journal().record_review("S9", "R1", 1, 0)

    def test_reviews_freeze_once_decided(self):
        journal = _published(_journal())
        with pytest.raises(DecisionTakenError):
            journal.record_review("S1", "R1", 0, 1)
        with pytest.raises(DecisionTakenError):
            journal.withdraw_review("S1", "R1", 1)
        assert journal.state.live_reviews("S1")["R1"].vote == 1


class TestOpinions:
    """Reader opinions on published articles."""

    def test_only_published_articles_can_be_rated(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        with pytest.raises(ArticleNotPublishedError):
            journal.record_opinion("A1", "U1", 1, 0)

    def test_inconsistency_flag(self):
        journal = _published(_journal())
        assert journal.record_opinion("A1", "R3", 1, 1).inconsistent
        assert not journal.record_opinion("A1", "R1", 1, 1).inconsistent
        assert not journal.record_opinion("A1", "U1", 0, 1).inconsistent

    def test_inconsistent_opinion_still_counts(self):
        journal = _published(_journal())
        journal.record_opinion("A1", "R3", 1, 1)
        assert current_labels(journal.state)["A1"].label is Label.ACCEPTABLE

    def test_rerating_replaces_the_opinion(self):
        journal = _published(_journal())
        journal.record_opinion("A1", "U1", 1, 1)
        journal.record_opinion("A1", "U1", 0, 2)
        opinion = journal.state.opinions["A1"]["U1"]
        assert (opinion.opinion, opinion.recorded_at) == (0, 2)


class TestDecisionEpoch:
    """Relabeling, retraining and deciding due submissions."""

    def test_insufficient_reviews(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        journal.record_review("S1", "R1", 1, 0)
        [record] = journal.run_decision_epoch(1)
        assert record.status is SubmissionStatus.REJECTED_WITHOUT_PREJUDICE
        assert record.basis is DecisionBasis.INSUFFICIENT_REVIEWS
        assert record.review_count == 1
        assert record.posterior is None
        assert journal.state.submissions["S1"].status is SubmissionStatus.REJECTED_WITHOUT_PREJUDICE

    def test_not_due_is_left_open(self):
        journal = _journal()
        journal.submit_article("AU", 0, review_window=3)
        journal.record_review("S1", "R1", 1, 0)
        journal.record_review("S1", "R2", 1, 0)
        assert journal.run_decision_epoch(2) == []
        assert journal.state.submissions["S1"].status is SubmissionStatus.OPEN

    def test_cold_start_review_majority(self):
        journal = _published(_journal())
        submission = journal.state.submissions["S1"]
        assert submission.status is SubmissionStatus.PUBLISHED
        assert submission.article == "A1"
        assert journal.state.articles == {"A1": "S1"}
        decided = [r for r in journal.log if r.kind is EventKind.DECISION_TAKEN]
        assert decided[0].payload["basis"] == DecisionBasis.COLD_START.value
        assert decided[0].payload["eligible"] == []

    def test_cold_start_majority_must_be_strict(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        journal.record_review("S1", "R1", 1, 0)
        journal.record_review("S1", "R2", 0, 0)
        [record] = journal.run_decision_epoch(1)
        assert record.status is SubmissionStatus.REJECTED
        assert record.basis is DecisionBasis.COLD_START

    def test_classifier_takes_over_once_reviewers_have_history(self):
        journal = _published(_journal())
        journal.record_opinion("A1", "U1", 1, 1)
        journal.record_opinion("A1", "U2", 1, 1)
        journal.submit_article("AU", 1)
        journal.record_review("S2", "R1", 1, 1)
        journal.record_review("S2", "R2", 1, 1)
        [record] = journal.run_decision_epoch(2)
        assert record.basis is DecisionBasis.CLASSIFIER
        assert record.eligible_reviewers == ("R1", "R2")
        # the only labeled article is acceptable, so the frequency prior is 1
        assert record.posterior.exact == Fraction(1)
        assert record.article == "A2"

    def test_labels_refresh_only_at_decision_epochs(self):
        journal = _published(_journal())
        journal.record_opinion("A1", "U1", 1, 1)
        journal.record_opinion("A1", "U2", 1, 1)
        journal.run_decision_epoch(2)
        assert journal.state.labels["A1"].label is Label.ACCEPTABLE

        journal.record_opinion("A1", "U3", 0, 2)
        journal.record_opinion("A1", "R3", 0, 2)
        assert journal.state.labels["A1"].label is Label.ACCEPTABLE
        assert current_labels(journal.state)["A1"].label is Label.UNACCEPTABLE

        journal.run_decision_epoch(3)
        assert journal.state.labels["A1"].label is Label.UNACCEPTABLE
        assert label_summary(journal.state)["unacceptable"] == 1

    def test_epoch_event_records_the_config(self):
        journal = _journal()
        config = EngineConfig(threshold=Fraction(1, 3))
        journal.run_decision_epoch(0, config)
        [run] = [r for r in journal.log if r.kind is EventKind.DECISION_EPOCH_RUN]
        assert run.payload["config_digest"] == config.digest()
        assert journal.state.config == config.to_dict()

    def test_compute_decisions_does_not_mutate(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        journal.record_review("S1", "R1", 1, 0)
        journal.record_review("S1", "R2", 1, 0)
        before = journal.digest()
        _, records = compute_decisions(journal.state, 1, journal.config)
        assert [r.article for r in records] == ["A1"]
        assert journal.digest() == before

    def test_article_ids_follow_queue_order(self):
        journal = _journal()
        journal.submit_article("AU", 0, review_window=2)
        journal.submit_article("AU", 0, review_window=1)
        for sid in ("S1", "S2"):
            journal.record_review(sid, "R1", 1, 0)
            journal.record_review(sid, "R2", 1, 0)
        records = journal.run_decision_epoch(2)
        assert [(r.submission, r.article) for r in records] == [("S2", "A1"), ("S1", "A2")]


class TestResubmission:
    """Only submissions rejected without prejudice may come back, once."""

    def _rwp(self) -> Journal:
        journal = _journal()
        journal.submit_article("AU", 0, url="v1")
        journal.run_decision_epoch(1)
        return journal

    def test_resubmit(self):
        journal = self._rwp()
        sid = journal.resubmit_article("S1", 1)
        submission = journal.state.submissions[sid]
        assert sid == "S2"
        assert submission.predecessor == "S1"
        assert submission.author == "AU"
        assert submission.url == "v1"
        assert submission.status is SubmissionStatus.OPEN

    def test_only_once(self):
        journal = self._rwp()
        journal.resubmit_article("S1", 1)
        with pytest.raises(ResubmissionError):
            journal.resubmit_article("S1", 1)

    def test_published_cannot_be_resubmitted(self):
        journal = _published(_journal())
        with pytest.raises(ResubmissionError):
            journal.resubmit_article("S1", 1)

    def test_open_cannot_be_resubmitted(self):
        journal = _journal()
        journal.submit_article("AU", 0)
        with pytest.raises(ResubmissionError):
            journal.resubmit_article("S1", 0)

    def test_same_author_only(self):
        journal = self._rwp()
        with pytest.raises(ResubmissionError):
            journal.submit_article("R1", 1, predecessor="S1")

    def test_unknown_predecessor(self):
        with pytest.raises(UnknownSubmissionError):
            _journal().resubmit_article("S7", 0)


class TestReviewQueue:
    """Queue ordering."""

    def test_orders_by_due_then_submitted(self):
        journal = _journal()
        journal.submit_article("AU", 0, review_window=3)
        journal.submit_article("AU", 0, review_window=1)
        journal.submit_article("AU", 1, review_window=0)
        assert journal.review_queue() == ["S2", "S3", "S1"]

    def test_ties_break_on_natural_id(self):
        journal = _journal()
        for _ in range(11):
            journal.submit_article("AU", 0)
        assert review_queue(journal.state) == [f"S{i}" for i in range(1, 12)]

    def test_decided_submissions_leave_the_queue(self):
        journal = _published(_journal())
        journal.submit_article("AU", 1)
        assert journal.review_queue(1) == ["S2"]


class TestLifecycleProperties:
    """Invariants over random operation sequences."""

    @given(scripts, engine_configs)
    @settings(max_examples=500, deadline=None)
    def test_status_never_leaves_a_terminal_state(self, script, config):
        journal = run_script(script, config)
        replayed = Journal(config)
        seen = {}
        for record in journal.log:
            replayed.ingest(record)
            for sid, submission in replayed.state.submissions.items():
                if sid in seen and seen[sid].is_terminal:
                    assert submission.status is seen[sid]
                seen[sid] = submission.status

    @given(scripts, engine_configs)
    @settings(max_examples=200, deadline=None)
    def test_relabeling_twice_is_idempotent(self, script, config):
        journal = run_script(script, config)
        now = journal.state.epoch
        journal.run_decision_epoch(now)
        first = journal.digest()
        assert journal.run_decision_epoch(now) == []
        assert journal.digest() == first

    @given(scripts, engine_configs)
    @settings(max_examples=200, deadline=None)
    def test_decisions_respect_due_epochs(self, script, config):
        journal = run_script(script, config)
        for record in journal.log:
            if record.kind is EventKind.DECISION_TAKEN:
                submission = journal.state.submissions[record.payload["submission"]]
                assert record.epoch >= submission.decision_due_at

    @given(scripts, engine_configs)
    @settings(max_examples=500, deadline=None)
    def test_live_records_hold_the_last_write(self, script, config):
        journal = run_script(script, config)
        reviews, opinions = {}, {}
        for record in journal.log:
            payload = record.payload
            if record.kind is EventKind.REVIEW_RECORDED:
                reviews[(payload["submission"], payload["reviewer"])] = (payload["vote"], record.epoch)
            elif record.kind is EventKind.REVIEW_WITHDRAWN:
                del reviews[(payload["submission"], payload["reviewer"])]
            elif record.kind is EventKind.OPINION_RECORDED:
                opinions[(payload["article"], payload["reader"])] = (payload["opinion"], record.epoch)

        state = journal.state
        live_reviews = {
            (sid, reviewer): (review.vote, review.recorded_at)
            for sid, votes in state.reviews.items()
            for reviewer, review in votes.items()
        }
        live_opinions = {
            (article, reader): (opinion.opinion, opinion.recorded_at)
            for article, entries in state.opinions.items()
            for reader, opinion in entries.items()
        }
        assert live_reviews == reviews
        assert live_opinions == opinions

    @given(scripts, engine_configs)
    @settings(max_examples=500, deadline=None)
    def test_inconsistency_flag_matches_the_live_review(self, script, config):
        state = run_script(script, config).state
        for article, entries in state.opinions.items():
            live = state.live_reviews(state.articles[article])
            for reader, opinion in entries.items():
                review = live.get(reader)
                assert opinion.inconsistent == (review is not None and review.vote != opinion.opinion)

    @given(scripts)
    @settings(max_examples=200, deadline=None)
    def test_articles_map_back_to_published_submissions(self, script):
        state = run_script(script).state
        assert len(state.articles) == state.next_article - 1
        for article, sid in state.articles.items():
            submission = state.submissions[sid]
            assert submission.status is SubmissionStatus.PUBLISHED
            assert submission.article == article
        for sid, votes in state.reviews.items():
            for reviewer in votes:
                assert reviewer in state.accounts

    @given(scripts)
    @settings(max_examples=100, deadline=None)
    def test_snapshot_is_independent(self, script):
        journal = run_script(script)
        snapshot = journal.snapshot()
        digest = snapshot.digest()
        journal.submit_article("U1", journal.state.epoch)
        assert snapshot.digest() == digest
        assert snapshot.digest() != journal.digest()
