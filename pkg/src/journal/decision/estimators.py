"""Class-conditional estimators and the class prior."""

from fractions import Fraction
from typing import Sequence

from journal.core.errors import NoDataError
from journal.core.types import check_binary

from .config import PriorMode, Smoothing
from .training import TrainingSet


def class_conditional(
    history: Sequence[int],
    vote: int,
    smoothing: Smoothing,
    lidstone_lambda: Fraction = Fraction(1),
) -> Fraction:
    """
    Estimate P(vote | class) from one reviewer's votes within that class.

    With c = votes in history equal to ``vote`` and N = len(history):

    - frequency:      c / N
    - paper-laplace:  (c + 1) / (N + 1)
    - lidstone(λ):    (c + λ) / (N + 2λ)

    Args:
        history: The reviewer's past votes on articles of one class
        vote: The vote being scored
        smoothing: Estimator to use
        lidstone_lambda: λ for Lidstone smoothing

    Returns:
        Exact probability

    Raises:
        NoDataError: Frequency estimate over an empty history
    """
    check_binary(vote, "vote")
    n = len(history)
    c = sum(1 for h in history if h == vote)

    if smoothing is Smoothing.FREQUENCY:
        if n == 0:
            raise NoDataError("frequency estimate needs at least one vote in the class")
        return Fraction(c, n)
    if smoothing is Smoothing.PAPER_LAPLACE:
        return Fraction(c + 1, n + 1)
    lam = Fraction(lidstone_lambda)
    return (c + lam) / (n + 2 * lam)


def class_prior(training: TrainingSet, prior_mode: PriorMode) -> Fraction:
    """
    P(acceptable) from the labeled articles.

    Args:
        training: Training set
        prior_mode: frequency (#acc / #rows) or smoothed ((#acc+1) / (#rows+2))

    Returns:
        Exact prior

    Raises:
        NoDataError: Frequency prior over an empty training set
    """
    total = len(training)
    accepted = training.acceptable_count
    if prior_mode is PriorMode.FREQUENCY:
        if total == 0:
            raise NoDataError("frequency prior needs at least one labeled article")
        return Fraction(accepted, total)
    return Fraction(accepted + 1, total + 2)
