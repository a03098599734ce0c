"""Reviewer voting strategies."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional

from journal.core.errors import InvalidConfigError
from journal.core.types import AccountId

from .plugins import AutomaticReviewer, PrivilegedDataView, ReviewerFeatures
from .rng import SeededRNG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReviewContext:
    """What an agent knows when it votes on a submission."""
    agent: AccountId
    author: AccountId
    quality: int                      # latent truth, 1 = acceptable to readers
    competence: float
    clique: Optional[str] = None
    author_clique: Optional[str] = None
    plugin: Optional[AutomaticReviewer] = None
    features: Optional[ReviewerFeatures] = None
    view: Optional[PrivilegedDataView] = None


def honest_vote(quality: int, competence: float, rng: SeededRNG) -> int:
    """Vote the truth with probability ``competence``, else its complement."""
    return quality if rng.bernoulli(competence) else 1 - quality


class ReviewerStrategy(ABC):
    name: str = ""

    @abstractmethod
    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        """Return an accept (1) / reject (0) vote."""


class HonestStrategy(ReviewerStrategy):
    name = "honest"

    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        return honest_vote(context.quality, context.competence, rng)


class RandomStrategy(ReviewerStrategy):
    name = "random"

    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        return rng.bernoulli(0.5)


class ContrarianStrategy(ReviewerStrategy):
    name = "contrarian"

    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        return 1 - honest_vote(context.quality, context.competence, rng)


class SelfPromoterStrategy(ReviewerStrategy):
    """Accepts its own submissions, honest otherwise."""

    name = "self-promoter"

    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        if context.author == context.agent:
            return 1
        return honest_vote(context.quality, context.competence, rng)


class ColluderStrategy(ReviewerStrategy):
    """Accepts submissions from its clique, honest otherwise."""

    name = "colluder"

    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        if context.clique is not None and context.author_clique == context.clique:
            return 1
        return honest_vote(context.quality, context.competence, rng)


class PluginStrategy(ReviewerStrategy):
    name = "plugin"

    def vote(self, context: ReviewContext, rng: SeededRNG) -> int:
        if context.plugin is None or context.features is None:
            raise InvalidConfigError(f"{context.agent} uses the plugin strategy without a plugin")
        return context.plugin.review(context.features, context.view)


class StrategyRegistry:
    """Registry of reviewer strategies by name."""

    def __init__(self):
        self._strategies: Dict[str, ReviewerStrategy] = {}

    def register(self, strategy: ReviewerStrategy) -> None:
        self._strategies[strategy.name] = strategy
        logger.debug(f"Registered strategy: {strategy.name}")

    def get(self, name: str) -> ReviewerStrategy:
        """
        Look up a strategy.

        Raises:
            InvalidConfigError: If no strategy has that name
        """
        try:
            return self._strategies[name]
        except KeyError:
            raise InvalidConfigError(
                f"Unknown strategy '{name}' (available: {', '.join(self.names())})"
            ) from None

    def names(self) -> List[str]:
        return sorted(self._strategies)


def default_strategy_registry() -> StrategyRegistry:
    registry = StrategyRegistry()
    for strategy in (
        HonestStrategy(),
        RandomStrategy(),
        ContrarianStrategy(),
        SelfPromoterStrategy(),
        ColluderStrategy(),
        PluginStrategy(),
    ):
        registry.register(strategy)
    return registry
