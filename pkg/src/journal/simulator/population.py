"""Agent population generation."""

import logging
from dataclasses import dataclass
from typing import List, Optional

from constants import AGENT_ID_PREFIX
from journal.core.types import AccountId

from .config import Role, SimConfig
from .rng import SeededRNG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Agent:
    id: AccountId
    role: Role
    strategy: str
    competence: float
    clique: Optional[str] = None
    plugin: Optional[str] = None


def generate_population(config: SimConfig, seed: int) -> List[Agent]:
    """
    Expand the configured profiles into agents.

    Profiles are expanded in order, shuffled by ``seed`` and numbered
    U001, U002, ... in shuffled order, so ids carry no hint of strategy.

    Args:
        config: Simulation config
        seed: Population seed

    Returns:
        Agents in id order
    """
    drafts = []
    for profile in config.population:
        for _ in range(profile.count):
            drafts.append(profile)

    SeededRNG(seed).shuffle(drafts)
    width = max(3, len(str(len(drafts))))
    agents = [
        Agent(
            id=f"{AGENT_ID_PREFIX}{index:0{width}d}",
            role=profile.role,
            strategy=profile.strategy,
            competence=profile.competence,
            clique=profile.clique,
            plugin=profile.plugin,
        )
        for index, profile in enumerate(drafts, start=1)
    ]
    logger.debug(f"Generated {len(agents)} agents from {len(config.population)} profiles")
    return agents
