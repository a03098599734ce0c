"""Mechanism performance metrics computed from a simulation log."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

from constants import DEFAULT_HIGH_COMPETENCE
from journal.core.errors import MetricsError
from journal.core.types import SubmissionId, SubmissionStatus
from journal.reputation.precision import all_precisions
from journal.store.events import EventKind, EventRecord
from journal.store.replay import replay

from .population import Agent

logger = logging.getLogger(__name__)

_MERIT = (SubmissionStatus.PUBLISHED.value, SubmissionStatus.REJECTED.value)


@dataclass(frozen=True)
class SimMetrics:
    """Undefined values (nothing to measure) are None, never 0."""
    decision_accuracy: Optional[float] = None
    leaderboard_alignment: Optional[float] = None
    per_strategy_publish_rate: Dict[str, Optional[float]] = field(default_factory=dict)
    exploit_gain: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "decision_accuracy": self.decision_accuracy,
            "leaderboard_alignment": self.leaderboard_alignment,
            "per_strategy_publish_rate": dict(self.per_strategy_publish_rate),
            "exploit_gain": self.exploit_gain,
        }


def _rate(hits: int, total: int) -> Optional[float]:
    return hits / total if total else None


def _mean(values: Sequence[Fraction]) -> Optional[Fraction]:
    return sum(values, Fraction(0)) / len(values) if values else None


def _counted_decisions(records: List[EventRecord], exclude_warmup: bool) -> List[Dict[str, Any]]:
    decisions = [r for r in records if r.kind is EventKind.DECISION_TAKEN]
    if not exclude_warmup:
        return [r.payload for r in decisions]

    # Warm-up lasts until the first decision any eligible reviewer took part in.
    first = next((r.epoch for r in decisions if r.payload.get("eligible")), None)
    if first is None:
        return []
    return [r.payload for r in decisions if r.epoch >= first]


def _group_precision(precisions: Mapping[Any, Any], agents: Iterable[Agent]) -> Optional[Fraction]:
    values = []
    for agent in agents:
        record = precisions.get(agent.id)
        if record is not None and record.precision is not None:
            values.append(record.precision)
    return _mean(values)


def compute_metrics(
    log: Iterable[EventRecord],
    ground_truth: Mapping[SubmissionId, int],
    population: Sequence[Agent] = (),
    high_competence: float = DEFAULT_HIGH_COMPETENCE,
    exclude_warmup: bool = True,
) -> SimMetrics:
    """
    Score a run against the latent quality of its submissions.

    Args:
        log: Simulation event log
        ground_truth: Submission id -> true quality (1 = acceptable)
        population: Agents, for the per-strategy figures
        high_competence: Competence threshold of the honest-high group
        exclude_warmup: Ignore decisions before any reviewer was eligible

    Returns:
        SimMetrics

    Raises:
        MetricsError: If the log and the ground truth disagree on submission ids
    """
    records = list(log)
    authors = {
        r.payload["submission"]: r.payload["author"]
        for r in records if r.kind is EventKind.SUBMITTED
    }
    if set(authors) != set(ground_truth):
        missing = sorted(set(authors) - set(ground_truth))[:5]
        extra = sorted(set(ground_truth) - set(authors))[:5]
        raise MetricsError(
            f"log and ground truth disagree on submissions (missing truth: {missing}, unknown: {extra})"
        )

    counted = [d for d in _counted_decisions(records, exclude_warmup) if d["status"] in _MERIT]
    correct = sum(
        1 for d in counted
        if (d["status"] == SubmissionStatus.PUBLISHED.value) == (ground_truth[d["submission"]] == 1)
    )
    decision_accuracy = _rate(correct, len(counted))

    strategy_of = {agent.id: agent.strategy for agent in population}
    tallies: Dict[str, List[int]] = {s: [0, 0] for s in sorted(set(strategy_of.values()))}
    for d in counted:
        strategy = strategy_of.get(authors[d["submission"]])
        if strategy is None:
            continue
        tallies[strategy][1] += 1
        if d["status"] == SubmissionStatus.PUBLISHED.value:
            tallies[strategy][0] += 1
    per_strategy = {s: _rate(hits, total) for s, (hits, total) in tallies.items()}

    exploit_gain = None
    if "self-promoter" in tallies:
        promoted = per_strategy["self-promoter"]
        baseline = per_strategy.get("honest")
        if promoted is not None and baseline is not None:
            exploit_gain = promoted - baseline

    leaderboard_alignment = None
    reviewers = [a for a in population if a.role.reviews]
    if reviewers:
        precisions = all_precisions(replay(records))
        honest = _group_precision(
            precisions,
            (a for a in reviewers if a.strategy == "honest" and a.competence >= high_competence),
        )
        noise = _group_precision(precisions, (a for a in reviewers if a.strategy == "random"))
        if honest is not None and noise is not None:
            leaderboard_alignment = float(honest - noise)

    metrics = SimMetrics(
        decision_accuracy=decision_accuracy,
        leaderboard_alignment=leaderboard_alignment,
        per_strategy_publish_rate=per_strategy,
        exploit_gain=exploit_gain,
    )
    logger.debug(f"Metrics over {len(counted)} counted decisions: {metrics}")
    return metrics
