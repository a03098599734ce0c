"""Simulation configuration: population profiles, workload and engine."""

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Tuple

from constants import (
    DEFAULT_HIGH_COMPETENCE,
    DEFAULT_PLUGIN_SIGNAL_ACCURACY,
    DEFAULT_REVIEWER_CAPACITY,
    DEFAULT_SIM_SEED,
)
from journal.core.errors import InvalidConfigError
from journal.decision.config import ColdStart, EngineConfig

from .plugins import default_plugin_registry
from .strategies import default_strategy_registry

MAX_SEED = 2**64 - 1


class Role(Enum):
    REVIEWER = "reviewer"
    READER = "reader"
    BOTH = "both"

    @property
    def reviews(self) -> bool:
        return self is not Role.READER

    @property
    def reads(self) -> bool:
        return self is not Role.REVIEWER


def default_sim_engine() -> EngineConfig:
    """Engine used by simulations: a fresh journal publishes by review majority."""
    return EngineConfig(cold_start=ColdStart.REVIEW_MAJORITY)


def _probability(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidConfigError(f"{name} must be a number, got {value!r}")
    if not 0 <= value <= 1:
        raise InvalidConfigError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def _count(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InvalidConfigError(f"{name} must be a non-negative integer, got {value!r}")
    return value


def _reject_unknown(cls: Any, data: Mapping[str, Any], what: str) -> None:
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise InvalidConfigError(f"Unknown {what} keys: {', '.join(unknown)}")


@dataclass(frozen=True)
class AgentProfile:
    """``count`` identical agents."""
    role: Role = Role.BOTH
    strategy: str = "honest"
    competence: float = 1.0
    count: int = 1
    clique: Optional[str] = None
    plugin: Optional[str] = None

    def validate(self) -> "AgentProfile":
        _probability("competence", self.competence)
        _count("count", self.count)
        default_strategy_registry().get(self.strategy)
        if self.strategy == "colluder" and not self.clique:
            raise InvalidConfigError("colluder profiles need a clique")
        if self.strategy == "plugin":
            if not self.plugin:
                raise InvalidConfigError("plugin profiles need a plugin name")
            default_plugin_registry().get(self.plugin)
        elif self.plugin is not None:
            raise InvalidConfigError(f"plugin given for non-plugin strategy '{self.strategy}'")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "role": self.role.value,
            "strategy": self.strategy,
            "competence": self.competence,
            "count": self.count,
            "clique": self.clique,
            "plugin": self.plugin,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AgentProfile":
        if not isinstance(data, Mapping):
            raise InvalidConfigError(f"population entries must be objects, got {data!r}")
        _reject_unknown(cls, data, "agent profile")
        kwargs = dict(data)
        try:
            if "role" in kwargs:
                kwargs["role"] = Role(kwargs["role"])
        except ValueError as e:
            raise InvalidConfigError(f"Invalid role: {e}") from e
        return cls(**kwargs).validate()


@dataclass(frozen=True)
class SimConfig:
    """Everything that determines a simulation run."""
    seed: int = DEFAULT_SIM_SEED
    epochs: int = 10
    submissions_per_epoch: int = 5
    reviews_per_submission: int = 3
    readers_per_article: int = 5
    population: Tuple[AgentProfile, ...] = ()
    engine: EngineConfig = field(default_factory=default_sim_engine)
    quality_prior: float = 0.5
    reviewer_capacity: int = DEFAULT_REVIEWER_CAPACITY
    plugin_signal_accuracy: float = DEFAULT_PLUGIN_SIGNAL_ACCURACY
    exclude_warmup: bool = True
    high_competence: float = DEFAULT_HIGH_COMPETENCE

    def validate(self) -> "SimConfig":
        """
        Check every field before any simulation work starts.

        Raises:
            InvalidConfigError: On the first invalid field
        """
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= MAX_SEED:
            raise InvalidConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        for name in (
            "epochs",
            "submissions_per_epoch",
            "reviews_per_submission",
            "readers_per_article",
            "reviewer_capacity",
        ):
            _count(name, getattr(self, name))
        for name in ("quality_prior", "plugin_signal_accuracy", "high_competence"):
            _probability(name, getattr(self, name))
        if not isinstance(self.exclude_warmup, bool):
            raise InvalidConfigError(f"exclude_warmup must be a boolean, got {self.exclude_warmup!r}")
        for profile in self.population:
            profile.validate()
        self.engine.validate()
        return self

    def with_seed(self, seed: int) -> "SimConfig":
        return dataclasses.replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        data["population"] = [p.to_dict() for p in self.population]
        data["engine"] = self.engine.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimConfig":
        """
        Build a config from a flat document whose keys mirror the field names.

        ``engine`` holds overrides applied on top of the simulation engine
        defaults.

        Raises:
            InvalidConfigError: On unknown keys or invalid values
        """
        if not isinstance(data, Mapping):
            raise InvalidConfigError("simulation config must be an object")
        _reject_unknown(cls, data, "simulation config")

        kwargs = dict(data)
        population = kwargs.get("population", [])
        if not isinstance(population, list):
            raise InvalidConfigError("population must be a list of agent profiles")
        kwargs["population"] = tuple(AgentProfile.from_dict(p) for p in population)

        engine = kwargs.get("engine", {})
        if not isinstance(engine, Mapping):
            raise InvalidConfigError("engine must be an object")
        kwargs["engine"] = default_sim_engine().with_overrides(**engine)

        return cls(**kwargs).validate()
