"""Automatic reviewers.

Plugins compete with human reviewers for reputation. They see structured
features of a submission, never its content. A privileged plugin may also
read the counterfactual reader verdict on rejected submissions; every such
read is reported through the view's access callback so it lands in the log.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from journal.core.errors import InvalidConfigError, InvalidInputError
from journal.core.state import JournalState
from journal.core.types import AccountId, SubmissionId, SubmissionStatus
from utils.serialization import natural_key

logger = logging.getLogger(__name__)

_REJECTED = (SubmissionStatus.REJECTED, SubmissionStatus.REJECTED_WITHOUT_PREJUDICE)


@dataclass(frozen=True)
class ReviewerFeatures:
    submission: SubmissionId
    author: AccountId
    signal: int                          # noisy estimate of the true quality
    author_record: Tuple[int, int] = (0, 0)  # author's published articles: (acceptable, unacceptable)


class PrivilegedDataView:
    """Counterfactual labels of rejected submissions for one privileged agent."""

    def __init__(
        self,
        agent: AccountId,
        state: JournalState,
        ground_truth: Mapping[SubmissionId, int],
        on_access: Callable[[SubmissionId], None],
    ):
        self.agent = agent
        self._state = state
        self._truth = ground_truth
        self._on_access = on_access

    def rejected_submissions(self, author: AccountId) -> List[SubmissionId]:
        """The author's rejected submissions (public information)."""
        return sorted(
            (s.id for s in self._state.submissions.values()
             if s.author == author and s.status in _REJECTED),
            key=natural_key,
        )

    def counterfactual_label(self, submission: SubmissionId) -> int:
        """
        What readers would have said about a rejected submission.

        Raises:
            InvalidInputError: If the submission is not rejected
        """
        found = self._state.submissions.get(submission)
        if found is None or found.status not in _REJECTED:
            raise InvalidInputError(f"{submission} is not a rejected submission")
        self._on_access(submission)
        return self._truth[submission]


class AutomaticReviewer(ABC):
    """Base class for plugin reviewers."""

    name: str = ""
    privileged: bool = False

    @abstractmethod
    def review(self, features: ReviewerFeatures, view: Optional[PrivilegedDataView]) -> int:
        """Return an accept (1) / reject (0) vote."""


class SignalFollower(AutomaticReviewer):
    name = "signal-follower"

    def review(self, features: ReviewerFeatures, view: Optional[PrivilegedDataView]) -> int:
        return features.signal


def _vote_from_record(good: int, bad: int, fallback: int) -> int:
    if good > bad:
        return 1
    if bad > good:
        return 0
    return fallback


class AuthorRecordReviewer(AutomaticReviewer):
    """Votes the author's published track record; the signal breaks ties."""

    name = "author-record"

    def review(self, features: ReviewerFeatures, view: Optional[PrivilegedDataView]) -> int:
        good, bad = features.author_record
        return _vote_from_record(good, bad, features.signal)


class PrivilegedAuthorRecordReviewer(AutomaticReviewer):
    """Author record extended with the verdicts readers never got to give."""

    name = "privileged-author-record"
    privileged = True

    def review(self, features: ReviewerFeatures, view: Optional[PrivilegedDataView]) -> int:
        good, bad = features.author_record
        if view is not None:
            for submission in view.rejected_submissions(features.author):
                if view.counterfactual_label(submission):
                    good += 1
                else:
                    bad += 1
        return _vote_from_record(good, bad, features.signal)


class PluginRegistry:
    """Registry of automatic reviewers by name."""

    def __init__(self):
        self._plugins: Dict[str, AutomaticReviewer] = {}

    def register(self, plugin: AutomaticReviewer) -> None:
        self._plugins[plugin.name] = plugin
        logger.debug(f"Registered plugin: {plugin.name} (privileged={plugin.privileged})")

    def get(self, name: str) -> AutomaticReviewer:
        """
        Look up a plugin.

        Raises:
            InvalidConfigError: If no plugin has that name
        """
        try:
            return self._plugins[name]
        except KeyError:
            raise InvalidConfigError(
                f"Unknown plugin '{name}' (available: {', '.join(self.names())})"
            ) from None

    def names(self) -> List[str]:
        return sorted(self._plugins)


def default_plugin_registry() -> PluginRegistry:
    registry = PluginRegistry()
    registry.register(SignalFollower())
    registry.register(AuthorRecordReviewer())
    registry.register(PrivilegedAuthorRecordReviewer())
    return registry
