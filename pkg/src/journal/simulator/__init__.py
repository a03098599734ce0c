"""Seeded agent-based simulation of the journal."""

from .config import AgentProfile, Role, SimConfig
from .engine import Simulation, SimulationResult, run_replications, simulate
from .metrics import SimMetrics, compute_metrics
from .population import Agent, generate_population

__all__ = [
    'Agent',
    'AgentProfile',
    'Role',
    'SimConfig',
    'SimMetrics',
    'Simulation',
    'SimulationResult',
    'compute_metrics',
    'generate_population',
    'run_replications',
    'simulate',
]
