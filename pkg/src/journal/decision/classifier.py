"""Naive Bayes acceptance posterior and the publication decision.

P(acceptable | r) is proportional to P(acceptable) * prod_i P(r_i | acceptable),
normalized against the same product for the unacceptable class. Only
eligible reviewers contribute factors. The exact rational is computed with
``Fraction``; the float is computed independently in log-space so that long
products of small factors never underflow.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Optional, Sequence, Tuple, Union

import numpy as np

from journal.core.errors import NoDataError
from journal.core.types import Outcome
from journal.reputation.pseudo import ReviewerKey

from .config import EngineConfig, PriorMode, Smoothing
from .estimators import class_conditional, class_prior
from .training import (
    ReviewVector,
    TrainingSet,
    eligible_reviewers,
    sorted_reviewers,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReviewerFactor:
    """Audit entry: one reviewer's contribution to both classes."""
    reviewer: ReviewerKey
    vote: int
    given_acceptable: Fraction
    given_unacceptable: Fraction


@dataclass(frozen=True)
class Posterior:
    exact: Fraction              # P(acceptable | r), exact
    p_acceptable: float          # same quantity, log-space float
    p_unacceptable: float
    prior: Fraction
    eligible_reviewers: FrozenSet[ReviewerKey]
    factors: Tuple[ReviewerFactor, ...]
    degenerate: bool = False     # prior fallback (empty training or 0/0 normalization)

    @property
    def exact_unacceptable(self) -> Fraction:
        return 1 - self.exact


def _conditional(history: Sequence[int], vote: int, config: EngineConfig) -> Fraction:
    # An empty class history is neutral under frequency counting.
    if config.smoothing is Smoothing.FREQUENCY and not history:
        return Fraction(1)
    return class_conditional(history, vote, config.smoothing, config.lidstone_lambda)


def resolve_prior(training: TrainingSet, config: EngineConfig) -> Tuple[Fraction, bool]:
    """
    Class prior, falling back to the smoothed prior when there is no data.

    Returns:
        (prior, degenerate) where degenerate marks the fallback
    """
    try:
        return class_prior(training, config.prior_mode), False
    except NoDataError:
        logger.info("No labeled articles; using the smoothed prior 1/2")
        return class_prior(training, PriorMode.SMOOTHED), True


def _log_space(prior: Fraction, factors: Sequence[ReviewerFactor]) -> Optional[Tuple[float, float]]:
    with np.errstate(divide="ignore"):
        acc = np.array([float(f.given_acceptable) for f in factors], dtype=np.float64)
        unacc = np.array([float(f.given_unacceptable) for f in factors], dtype=np.float64)
        log_acc = np.log(float(prior)) + np.sum(np.log(acc))
        log_unacc = np.log(float(1 - prior)) + np.sum(np.log(unacc))

    if np.isneginf(log_acc) and np.isneginf(log_unacc):
        return None
    log_total = np.logaddexp(log_acc, log_unacc)
    return float(np.exp(log_acc - log_total)), float(np.exp(log_unacc - log_total))


def posterior_acceptable(
    training: TrainingSet,
    review_vector: ReviewVector,
    config: EngineConfig,
) -> Posterior:
    """
    Probability that readers will find the submission acceptable.

    Reviewers outside the review vector, or not yet eligible, contribute no
    factor. An eligible reviewer with no history in one class contributes
    that class's smoothed N=0 factor.

    Args:
        training: Labeled published articles
        review_vector: The submission's live votes
        config: Engine configuration

    Returns:
        Posterior with exact and float values and a factor audit trail
    """
    eligible = eligible_reviewers(training, review_vector, config.min_prior_reviews)
    prior, degenerate = resolve_prior(training, config)

    factors = []
    for reviewer in sorted_reviewers(eligible):
        vote = review_vector.entries[reviewer]
        history = training.history(reviewer)
        factors.append(ReviewerFactor(
            reviewer=reviewer,
            vote=vote,
            given_acceptable=_conditional(history.acceptable, vote, config),
            given_unacceptable=_conditional(history.unacceptable, vote, config),
        ))

    score_acc = prior
    score_unacc = 1 - prior
    for factor in factors:
        score_acc *= factor.given_acceptable
        score_unacc *= factor.given_unacceptable

    floats = _log_space(prior, factors)
    if score_acc + score_unacc == 0 or floats is None:
        logger.warning("Both class scores are zero; posterior falls back to the prior")
        exact = prior
        p_acc, p_unacc = float(prior), float(1 - prior)
        degenerate = True
    else:
        exact = score_acc / (score_acc + score_unacc)
        p_acc, p_unacc = floats

    logger.debug(
        f"posterior {exact} from prior {prior} and {len(factors)} factors "
        f"({review_vector.m} reviews, {len(eligible)} eligible)"
    )
    return Posterior(
        exact=exact,
        p_acceptable=p_acc,
        p_unacceptable=p_unacc,
        prior=prior,
        eligible_reviewers=eligible,
        factors=tuple(factors),
        degenerate=degenerate,
    )


def likelihood_ratio(
    training: TrainingSet,
    reviewer: ReviewerKey,
    vote: int,
    config: EngineConfig,
) -> Optional[Fraction]:
    """P(vote | acceptable) / P(vote | unacceptable); None when the denominator is 0."""
    history = training.history(reviewer)
    given_unacc = _conditional(history.unacceptable, vote, config)
    if given_unacc == 0:
        return None
    return _conditional(history.acceptable, vote, config) / given_unacc


def decide(posterior: Union[Posterior, Fraction, float], threshold: Union[Fraction, float]) -> Outcome:
    """Publish iff the posterior strictly exceeds the threshold."""
    value = posterior.exact if isinstance(posterior, Posterior) else posterior
    return Outcome.PUBLISH if value > threshold else Outcome.REJECT
