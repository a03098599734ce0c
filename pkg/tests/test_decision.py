"""
Unit and property tests for the Naive Bayes decision engine.

Covers the worked example, estimator edge cases, agreement with the
brute-force oracle and the structural properties of the posterior.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from constants import POSTERIOR_TOLERANCE
from journal.core.errors import InvalidConfigError, NoDataError
from journal.core.types import Label, Outcome
from journal.decision.classifier import decide, likelihood_ratio, posterior_acceptable
from journal.decision.config import ColdStart, EngineConfig, PriorMode, Smoothing
from journal.decision.estimators import class_conditional, class_prior
from journal.decision.training import (
    ReviewVector,
    TrainingSet,
    build_training_set,
    eligible_reviewers,
    review_vector_for,
)

from tests import oracle

REVIEWERS = ["R1", "R2", "R3", "R4", "R5", "R6"]
LAMBDAS = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)]


def _worked_example(journal, **overrides):
    config = EngineConfig(min_prior_reviews=0, **overrides)
    state = journal.state
    training = build_training_set(state, config.pseudo_reviewers)
    vector = review_vector_for(state, "S4", config.pseudo_reviewers)
    return training, vector, config


@st.composite
def vote_matrices(draw, max_articles=8):
    """Random labeled articles, each reviewed by a random subset of reviewers."""
    n_articles = draw(st.integers(min_value=0, max_value=max_articles))
    matrix = {}
    labels = {}
    for i in range(1, n_articles + 1):
        article = f"A{i}"
        reviewers = draw(st.lists(st.sampled_from(REVIEWERS), unique=True, max_size=len(REVIEWERS)))
        matrix[article] = {r: draw(st.integers(0, 1)) for r in reviewers}
        labels[article] = draw(st.booleans())
    review_reviewers = draw(st.lists(st.sampled_from(REVIEWERS), unique=True, max_size=len(REVIEWERS)))
    review = {r: draw(st.integers(0, 1)) for r in review_reviewers}
    return matrix, labels, review


def _training(matrix, labels):
    rows = [
        (article, Label.ACCEPTABLE if labels[article] else Label.UNACCEPTABLE)
        for article in matrix
    ]
    return TrainingSet.from_rows(rows, {a: dict(v) for a, v in matrix.items()})


class TestWorkedExample:
    """Test the three-article, four-reviewer worked example."""

    def test_training_set_labels(self, worked_example_journal):
        """Test the reader tallies behind the training set."""
        training = build_training_set(worked_example_journal.state)
        assert training.rows == [
            ("A1", Label.ACCEPTABLE),
            ("A2", Label.ACCEPTABLE),
            ("A3", Label.UNACCEPTABLE),
        ]
        assert class_prior(training, PriorMode.FREQUENCY) == Fraction(2, 3)

    def test_frequency_conditionals(self, worked_example_journal):
        """Test the raw frequency estimates for the S4 votes."""
        training, _, _ = _worked_example(worked_example_journal)
        r2 = training.history("R2")
        r4 = training.history("R4")
        assert class_conditional(r2.acceptable, 1, Smoothing.FREQUENCY) == Fraction(1, 2)
        assert class_conditional(r2.unacceptable, 1, Smoothing.FREQUENCY) == 1
        assert class_conditional(r4.acceptable, 1, Smoothing.FREQUENCY) == 0

    def test_paper_laplace_conditional(self, worked_example_journal):
        """Test that (c+1)/(N+1) turns the zero estimate into 1/3."""
        training, _, _ = _worked_example(worked_example_journal)
        history = training.history("R4").acceptable
        assert class_conditional(history, 1, Smoothing.PAPER_LAPLACE) == Fraction(1, 3)

    def test_paper_laplace_posterior(self, worked_example_journal):
        """Test posterior 2/11 and a reject decision."""
        posterior = posterior_acceptable(*_worked_example(worked_example_journal, smoothing=Smoothing.PAPER_LAPLACE))

        assert posterior.exact == Fraction(2, 11)
        assert posterior.prior == Fraction(2, 3)
        assert abs(posterior.p_acceptable - 2 / 11) < POSTERIOR_TOLERANCE
        assert decide(posterior, Fraction(1, 2)) is Outcome.REJECT

    def test_class_scores(self, worked_example_journal):
        """Test the unnormalized scores through the factor audit trail."""
        posterior = posterior_acceptable(*_worked_example(worked_example_journal, smoothing=Smoothing.PAPER_LAPLACE))
        score_acc = posterior.prior
        score_unacc = 1 - posterior.prior
        for factor in posterior.factors:
            score_acc *= factor.given_acceptable
            score_unacc *= factor.given_unacceptable
        assert score_acc == Fraction(2, 27)
        assert score_unacc == Fraction(1, 3)

    def test_frequency_collapses_to_zero(self, worked_example_journal):
        """Test that one unseen vote zeroes the frequency posterior."""
        posterior = posterior_acceptable(*_worked_example(worked_example_journal, smoothing=Smoothing.FREQUENCY))
        assert posterior.exact == 0
        assert posterior.p_acceptable == 0.0
        assert not posterior.degenerate

    def test_lidstone_posterior(self, worked_example_journal):
        """Test the default Lidstone estimator with lambda 1."""
        posterior = posterior_acceptable(*_worked_example(worked_example_journal))
        assert posterior.exact == Fraction(3, 11)

    def test_default_eligibility_excludes_single_review(self, worked_example_journal):
        """Test that R1, with one review on a published article, is not eligible."""
        training = build_training_set(worked_example_journal.state)
        vector = review_vector_for(worked_example_journal.state, "S4")
        assert eligible_reviewers(training, vector, 2) == frozenset({"R2", "R3", "R4"})

    def test_likelihood_ratio(self, worked_example_journal):
        """Test the per-vote evidence ratio."""
        training, _, config = _worked_example(worked_example_journal, smoothing=Smoothing.PAPER_LAPLACE)
        assert likelihood_ratio(training, "R4", 1, config) == Fraction(1, 3)
        assert likelihood_ratio(training, "R2", 1, config) == Fraction(2, 3)

    def test_likelihood_ratio_undefined(self, worked_example_journal):
        """Test that a zero denominator yields None."""
        training, _, config = _worked_example(worked_example_journal, smoothing=Smoothing.FREQUENCY)
        # R4 never rejected an unacceptable article
        assert likelihood_ratio(training, "R4", 0, config) is None


class TestEstimators:
    """Test class-conditional and prior estimators."""

    def test_frequency_needs_data(self):
        """Test NO_DATA on an empty history."""
        with pytest.raises(NoDataError):
            class_conditional((), 1, Smoothing.FREQUENCY)

    def test_paper_laplace_empty_history(self):
        assert class_conditional((), 1, Smoothing.PAPER_LAPLACE) == 1

    def test_lidstone_empty_history(self):
        assert class_conditional((), 0, Smoothing.LIDSTONE, Fraction(1, 2)) == Fraction(1, 2)

    def test_lidstone_counts(self):
        assert class_conditional((1, 1, 0), 1, Smoothing.LIDSTONE, Fraction(1)) == Fraction(3, 5)

    def test_frequency_prior_needs_data(self):
        with pytest.raises(NoDataError):
            class_prior(TrainingSet(), PriorMode.FREQUENCY)

    def test_smoothed_prior_empty(self):
        assert class_prior(TrainingSet(), PriorMode.SMOOTHED) == Fraction(1, 2)

    def test_empty_training_falls_back(self):
        """Test the degenerate flag when no article is labeled."""
        posterior = posterior_acceptable(TrainingSet(), ReviewVector({"R1": 1}), EngineConfig())
        assert posterior.exact == Fraction(1, 2)
        assert posterior.degenerate
        assert posterior.factors == ()


class TestDecide:
    """Test the publication threshold."""

    def test_strictly_greater(self):
        assert decide(Fraction(1, 2), Fraction(1, 2)) is Outcome.REJECT

    def test_above(self):
        assert decide(Fraction(3, 4), Fraction(1, 2)) is Outcome.PUBLISH

    def test_below(self):
        assert decide(0.1, Fraction(1, 2)) is Outcome.REJECT


class TestEngineConfig:
    """Test configuration parsing and validation."""

    def test_defaults(self):
        config = EngineConfig()
        assert config.smoothing is Smoothing.LIDSTONE
        assert config.threshold == Fraction(1, 2)
        assert config.min_prior_reviews == 2
        assert config.cold_start is ColdStart.PRIOR

    def test_decimal_threshold(self):
        assert EngineConfig.from_dict({"threshold": "0.25"}).threshold == Fraction(1, 4)
        assert EngineConfig.from_dict({"threshold": 0.1}).threshold == Fraction(1, 10)

    def test_dict_round_trip(self):
        config = EngineConfig(smoothing=Smoothing.PAPER_LAPLACE, threshold=Fraction(2, 3), pseudo_reviewers=True)
        assert EngineConfig.from_dict(config.to_dict()) == config

    @pytest.mark.parametrize("data", [
        {"threshold": "1"},
        {"threshold": "0"},
        {"lidstone_lambda": "0"},
        {"min_reviews": -1},
        {"smoothing": "bayes"},
        {"pseudo_reviewers": "maybe"},
        {"unknown": 1},
    ])
    def test_invalid(self, data):
        with pytest.raises(InvalidConfigError):
            EngineConfig.from_dict(data)

    def test_overrides_skip_none(self):
        config = EngineConfig().with_overrides(threshold=None, min_reviews=3)
        assert config.min_reviews == 3
        assert config.threshold == Fraction(1, 2)


class TestPosteriorProperties:
    """Property tests for the posterior."""

    @settings(max_examples=1000, deadline=None)
    @given(
        data=vote_matrices(),
        smoothing=st.sampled_from(list(Smoothing)),
        lam=st.sampled_from(LAMBDAS),
        prior_mode=st.sampled_from(list(PriorMode)),
    )
    def test_matches_oracle(self, data, smoothing, lam, prior_mode):
        """Test exact agreement with direct evaluation of the product formula."""
        matrix, labels, review = data
        config = EngineConfig(
            smoothing=smoothing, lidstone_lambda=lam, prior_mode=prior_mode, min_prior_reviews=0,
        )
        posterior = posterior_acceptable(_training(matrix, labels), ReviewVector(review), config)
        expected = oracle.posterior(matrix, labels, review, smoothing.value, lam, prior_mode.value)

        assert posterior.exact == expected
        assert abs(posterior.p_acceptable - float(expected)) <= POSTERIOR_TOLERANCE

    @settings(max_examples=500, deadline=None)
    @given(data=vote_matrices(), smoothing=st.sampled_from(list(Smoothing)))
    def test_normalized(self, data, smoothing):
        """Test that both class posteriors sum to one."""
        matrix, labels, review = data
        config = EngineConfig(smoothing=smoothing, min_prior_reviews=0)
        posterior = posterior_acceptable(_training(matrix, labels), ReviewVector(review), config)

        assert 0 <= posterior.exact <= 1
        assert posterior.exact + posterior.exact_unacceptable == 1
        assert abs(posterior.p_acceptable + posterior.p_unacceptable - 1) <= POSTERIOR_TOLERANCE

    @settings(max_examples=500, deadline=None)
    @given(data=vote_matrices(), smoothing=st.sampled_from(list(Smoothing)), min_prior=st.integers(0, 3))
    def test_reviewer_order_invariant(self, data, smoothing, min_prior):
        """Test that permuting reviewers leaves the posterior unchanged."""
        matrix, labels, review = data
        config = EngineConfig(smoothing=smoothing, min_prior_reviews=min_prior)
        reversed_matrix = {a: dict(reversed(list(v.items()))) for a, v in reversed(list(matrix.items()))}
        reversed_labels = {a: labels[a] for a in reversed_matrix}

        forward = posterior_acceptable(_training(matrix, labels), ReviewVector(review), config)
        backward = posterior_acceptable(
            _training(reversed_matrix, reversed_labels),
            ReviewVector(dict(reversed(list(review.items())))),
            config,
        )
        assert forward.exact == backward.exact
        assert forward.eligible_reviewers == backward.eligible_reviewers

    @settings(max_examples=500, deadline=None)
    @given(
        data=vote_matrices(),
        extra=st.sampled_from(REVIEWERS),
        vote=st.integers(0, 1),
        smoothing=st.sampled_from([Smoothing.PAPER_LAPLACE, Smoothing.LIDSTONE]),
    )
    def test_evidence_monotone(self, data, extra, vote, smoothing):
        """Test that a vote with likelihood ratio above one raises the posterior."""
        matrix, labels, review = data
        review.pop(extra, None)
        config = EngineConfig(smoothing=smoothing, prior_mode=PriorMode.SMOOTHED, min_prior_reviews=0)
        training = _training(matrix, labels)

        before = posterior_acceptable(training, ReviewVector(review), config).exact
        after = posterior_acceptable(training, ReviewVector({**review, extra: vote}), config).exact
        ratio = likelihood_ratio(training, extra, vote, config)

        if ratio > 1:
            assert after > before
        elif ratio < 1:
            assert after < before
        else:
            assert after == before

    @settings(max_examples=500, deadline=None)
    @given(data=vote_matrices(), copies=st.integers(1, 3))
    def test_identical_rows_scale_counts(self, data, copies):
        """Test that duplicating every training article leaves frequency estimates unchanged."""
        matrix, labels, review = data
        duplicated = {}
        duplicated_labels = {}
        for article, votes in matrix.items():
            for k in range(copies):
                duplicated[f"{article}x{k}"] = dict(votes)
                duplicated_labels[f"{article}x{k}"] = labels[article]
        config = EngineConfig(smoothing=Smoothing.FREQUENCY, min_prior_reviews=0)

        original = posterior_acceptable(_training(matrix, labels), ReviewVector(review), config)
        scaled = posterior_acceptable(_training(duplicated, duplicated_labels), ReviewVector(review), config)
        assert original.exact == scaled.exact
