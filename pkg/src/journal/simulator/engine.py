"""Seeded multi-epoch simulation of the journal."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Set, Tuple

from constants import DEFAULT_REPLICATION_WORKERS
from journal.core.journal import Journal
from journal.core.labels import current_labels
from journal.core.types import AccountId, Label, MajorityLabel, SubmissionId, SubmissionStatus
from journal.store.events import EventLog

from .config import SimConfig
from .metrics import SimMetrics, compute_metrics
from .plugins import PluginRegistry, PrivilegedDataView, ReviewerFeatures, default_plugin_registry
from .population import Agent, generate_population
from .rng import SeededRNG
from .strategies import ReviewContext, StrategyRegistry, default_strategy_registry, honest_vote

logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    config: SimConfig
    log: EventLog
    metrics: SimMetrics
    ground_truth: Dict[SubmissionId, int]
    population: List[Agent]
    digest: str


class Simulation:
    """
    One seeded run.

    Epoch 0 registers every agent. Each later epoch resubmits what was
    rejected without prejudice, draws new submissions, assigns reviews
    round-robin over the review queue, lets readers rate earlier
    publications and finally runs the decision epoch.
    """

    def __init__(
        self,
        config: SimConfig,
        strategies: Optional[StrategyRegistry] = None,
        plugins: Optional[PluginRegistry] = None,
    ):
        self.config = config.validate()
        self.strategies = strategies or default_strategy_registry()
        self.plugins = plugins or default_plugin_registry()
        self.population = generate_population(config, config.seed)
        self.rng = SeededRNG(config.seed).fork()
        self.journal = Journal(config.engine)
        self.ground_truth: Dict[SubmissionId, int] = {}

        self._agents = {agent.id: agent for agent in self.population}
        self._reviewers = [a for a in self.population if a.role.reviews]
        self._readers = [a for a in self.population if a.role.reads]
        self._resubmitted: Set[SubmissionId] = set()
        self._cursor = 0
        self._labels: Dict[str, MajorityLabel] = {}

    def run(self) -> SimulationResult:
        if self.config.epochs > 0:
            for agent in self.population:
                self.journal.register_account(agent.id, 0)

        for now in range(1, self.config.epochs + 1):
            self._resubmit(now)
            self._submit(now)
            self._labels = current_labels(self.journal.state)
            self._self_reviews(now)
            self._assign_reviews(now)
            self._collect_opinions(now)
            self.journal.run_decision_epoch(now)

        metrics = compute_metrics(
            self.journal.log,
            self.ground_truth,
            self.population,
            high_competence=self.config.high_competence,
            exclude_warmup=self.config.exclude_warmup,
        )
        digest = self.journal.digest()
        logger.info(
            f"Simulation seed={self.config.seed}: {len(self.journal.log)} events, "
            f"{len(self.ground_truth)} submissions, digest {digest[:12]}"
        )
        return SimulationResult(
            config=self.config,
            log=self.journal.log,
            metrics=metrics,
            ground_truth=dict(self.ground_truth),
            population=list(self.population),
            digest=digest,
        )

    # ------------------------------------------------------------------
    # Epoch phases
    # ------------------------------------------------------------------

    def _resubmit(self, now: int) -> None:
        state = self.journal.state
        candidates = [
            s.id for s in state.submissions.values()
            if s.status is SubmissionStatus.REJECTED_WITHOUT_PREJUDICE
            and s.predecessor is None
            and s.id not in self._resubmitted
        ]
        for predecessor in candidates:
            submission_id = self.journal.resubmit_article(predecessor, now)
            self.ground_truth[submission_id] = self.ground_truth[predecessor]
            self._resubmitted.add(predecessor)

    def _submit(self, now: int) -> None:
        if not self.population:
            return
        for _ in range(self.config.submissions_per_epoch):
            author = self.rng.choice(self.population)
            quality = self.rng.bernoulli(self.config.quality_prior)
            submission_id = self.journal.submit_article(author.id, now)
            self.ground_truth[submission_id] = quality

    def _self_reviews(self, now: int) -> None:
        state = self.journal.state
        for submission_id in self.journal.review_queue(now):
            author = self._agents.get(state.submissions[submission_id].author)
            if author is None or author.strategy != "self-promoter" or not author.role.reviews:
                continue
            if author.id not in state.live_reviews(submission_id):
                self._cast_vote(author, submission_id, now)

    def _assign_reviews(self, now: int) -> None:
        if not self._reviewers:
            return
        state = self.journal.state
        load: Dict[AccountId, int] = {}
        capacity = self.config.reviewer_capacity

        for submission_id in self.journal.review_queue(now):
            needed = self.config.reviews_per_submission - len(state.live_reviews(submission_id))
            tried = 0
            while needed > 0 and tried < len(self._reviewers):
                agent = self._reviewers[self._cursor % len(self._reviewers)]
                self._cursor += 1
                tried += 1
                if load.get(agent.id, 0) >= capacity or agent.id in state.live_reviews(submission_id):
                    continue
                self._cast_vote(agent, submission_id, now)
                load[agent.id] = load.get(agent.id, 0) + 1
                needed -= 1

    def _author_record(self, author: AccountId) -> Tuple[int, int]:
        good = bad = 0
        for label in self._labels.values():
            if self.journal.state.submission_of(label.article).author != author:
                continue
            if label.label is Label.ACCEPTABLE:
                good += 1
            elif label.label is Label.UNACCEPTABLE:
                bad += 1
        return good, bad

    def _cast_vote(self, agent: Agent, submission_id: SubmissionId, now: int) -> None:
        submission = self.journal.state.submissions[submission_id]
        author = self._agents.get(submission.author)
        quality = self.ground_truth[submission_id]
        context = ReviewContext(
            agent=agent.id,
            author=submission.author,
            quality=quality,
            competence=agent.competence,
            clique=agent.clique,
            author_clique=author.clique if author else None,
        )

        if agent.plugin is not None:
            plugin = self.plugins.get(agent.plugin)
            signal = quality if self.rng.bernoulli(self.config.plugin_signal_accuracy) else 1 - quality
            features = ReviewerFeatures(
                submission=submission_id,
                author=submission.author,
                signal=signal,
                author_record=self._author_record(submission.author),
            )
            view = None
            if plugin.privileged:
                view = PrivilegedDataView(
                    agent.id,
                    self.journal.state,
                    self.ground_truth,
                    on_access=lambda seen: self.journal.record_privileged_access(agent.id, seen, now),
                )
            context = replace(context, plugin=plugin, features=features, view=view)

        vote = self.strategies.get(agent.strategy).vote(context, self.rng)
        self.journal.record_review(submission_id, agent.id, vote, now)

    def _collect_opinions(self, now: int) -> None:
        if not self._readers:
            return
        state = self.journal.state
        for article in state.published_articles():
            opinions = state.opinions.get(article, {})
            needed = self.config.readers_per_article - len(opinions)
            if needed <= 0:
                continue
            candidates = [r for r in self._readers if r.id not in opinions]
            if not candidates:
                continue
            quality = self.ground_truth[state.articles[article]]
            for reader in self.rng.sample(candidates, min(needed, len(candidates))):
                opinion = honest_vote(quality, reader.competence, self.rng)
                self.journal.record_opinion(article, reader.id, opinion, now)


def simulate(
    config: SimConfig,
    strategies: Optional[StrategyRegistry] = None,
    plugins: Optional[PluginRegistry] = None,
) -> SimulationResult:
    """
    Run one simulation.

    Args:
        config: Simulation config (validated before anything runs)
        strategies: Strategy registry (defaults to the built-ins)
        plugins: Automatic reviewer registry (defaults to the built-ins)

    Returns:
        SimulationResult with the replayable log and metrics

    Raises:
        InvalidConfigError: If the config is invalid
    """
    return Simulation(config, strategies, plugins).run()


def run_replications(
    config: SimConfig,
    seeds: Iterable[int],
    workers: int = DEFAULT_REPLICATION_WORKERS,
) -> List[SimulationResult]:
    """
    Run independent replications of ``config``, one per seed.

    Runs share no mutable state. Results come back in seed order.
    """
    configs = [config.with_seed(seed).validate() for seed in seeds]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(executor.map(simulate, configs))
    logger.info(f"Completed {len(results)} replications")
    return results
