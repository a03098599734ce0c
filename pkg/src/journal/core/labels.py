"""Reader-majority labeling."""

from typing import Dict, Iterable

from .state import JournalState
from .types import ArticleId, Label, MajorityLabel, check_binary


def tally_majority(opinions: Iterable[int], article: ArticleId = "") -> MajorityLabel:
    """
    Label an article from its readers' opinions.

    An article is acceptable only when positives strictly exceed n/2, so
    ties and articles nobody has rated are never acceptable.

    Args:
        opinions: Binary opinions (1 = acceptable)
        article: Article id carried into the result

    Returns:
        MajorityLabel with counts and label
    """
    values = [check_binary(o, "opinion") for o in opinions]
    n = len(values)
    positives = sum(values)
    if n == 0:
        label = Label.UNLABELED
    elif 2 * positives > n:
        label = Label.ACCEPTABLE
    else:
        label = Label.UNACCEPTABLE
    return MajorityLabel(article=article, n=n, positives=positives, label=label)


def current_labels(state: JournalState) -> Dict[ArticleId, MajorityLabel]:
    """Tally every published article from its live opinions."""
    return {
        article: tally_majority(
            (o.opinion for o in state.opinions.get(article, {}).values()),
            article,
        )
        for article in state.published_articles()
    }
