"""
Configuration system for JNDM.

Supports configuration from:
1. Config file (.jndm.yaml in the working directory, its parents or home)
2. Environment variables (JNDM_*)
3. CLI arguments (override everything else)
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from constants import (
    CONFIG_FILE_NAME,
    DEFAULT_JOURNAL_PATH,
    ENV_JOURNAL,
    ENV_LAMBDA,
    ENV_MIN_PRIOR_REVIEWS,
    ENV_MIN_REVIEWS,
    ENV_PSEUDO_REVIEWERS,
    ENV_REVIEW_WINDOW,
    ENV_SMOOTHING,
    ENV_THRESHOLD,
    OUTPUT_FORMATS,
    OUTPUT_HUMAN,
)
from journal.core.errors import InvalidConfigError
from journal.decision.config import EngineConfig

logger = logging.getLogger(__name__)

# Environment variable -> EngineConfig field
ENGINE_ENV_VARS = {
    ENV_SMOOTHING: "smoothing",
    ENV_LAMBDA: "lidstone_lambda",
    ENV_THRESHOLD: "threshold",
    ENV_MIN_REVIEWS: "min_reviews",
    ENV_MIN_PRIOR_REVIEWS: "min_prior_reviews",
    ENV_PSEUDO_REVIEWERS: "pseudo_reviewers",
    ENV_REVIEW_WINDOW: "review_window",
}


@dataclass
class JndmConfig:
    """Complete JNDM configuration."""
    engine: EngineConfig = field(default_factory=EngineConfig)
    journal_path: Path = Path(DEFAULT_JOURNAL_PATH)
    output_format: str = OUTPUT_HUMAN


def load_document(path: Path) -> Any:
    """
    Load a YAML or JSON document.

    Args:
        path: Document path

    Returns:
        Parsed document ({} for an empty file)

    Raises:
        InvalidConfigError: If the file cannot be read or parsed
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f) or {}
    except OSError as e:
        raise InvalidConfigError(f"Cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise InvalidConfigError(f"Cannot parse {path}: {e}") from e


def load_config_file(config_path: Optional[Path] = None) -> Optional[Dict[str, Any]]:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to config file (if None, searches for .jndm.yaml)

    Returns:
        Config dict or None if not found
    """
    if config_path is not None:
        if not config_path.exists():
            raise InvalidConfigError(f"Config file not found: {config_path}")
        return load_document(config_path)

    # Search for .jndm.yaml in current directory and parents
    current = Path.cwd()
    while current != current.parent:
        config_file = current / CONFIG_FILE_NAME
        if config_file.exists():
            logger.debug(f"Using config file {config_file}")
            return load_document(config_file)
        current = current.parent

    # Check home directory
    home_config = Path.home() / CONFIG_FILE_NAME
    if home_config.exists():
        logger.debug(f"Using config file {home_config}")
        return load_document(home_config)

    return None


def load_config(
    config_path: Optional[Path] = None,
    journal_path: Optional[Path] = None,
    output_format: Optional[str] = None,
    **engine_overrides: Any,
) -> JndmConfig:
    """
    Load JNDM configuration from file, environment and CLI overrides.

    Priority (highest to lowest):
    1. CLI arguments (non-None values)
    2. Environment variables (JNDM_*)
    3. Config file (.jndm.yaml)
    4. Defaults

    Args:
        config_path: Optional path to config file
        journal_path: --journal value
        output_format: --format value
        **engine_overrides: EngineConfig fields given on the command line

    Returns:
        JndmConfig instance

    Raises:
        InvalidConfigError: If any layer holds an invalid value
    """
    config = JndmConfig()
    engine: Dict[str, Any] = {}

    file_config = load_config_file(config_path)
    if file_config:
        if not isinstance(file_config, dict):
            raise InvalidConfigError("Config file must hold a mapping")
        unknown = sorted(set(file_config) - {'journal', 'format', 'engine'})
        if unknown:
            raise InvalidConfigError(f"Unknown config file keys: {', '.join(unknown)}")
        if 'journal' in file_config:
            config.journal_path = Path(file_config['journal'])
        if 'format' in file_config:
            config.output_format = file_config['format']
        if 'engine' in file_config:
            if not isinstance(file_config['engine'], dict):
                raise InvalidConfigError("'engine' must be a mapping")
            engine.update(file_config['engine'])

    # Override with environment variables
    if os.environ.get(ENV_JOURNAL):
        config.journal_path = Path(os.environ[ENV_JOURNAL])
    for env_name, field_name in ENGINE_ENV_VARS.items():
        if os.environ.get(env_name):
            engine[field_name] = os.environ[env_name]

    # Override with CLI arguments
    if journal_path is not None:
        config.journal_path = Path(journal_path)
    if output_format is not None:
        config.output_format = output_format
    engine.update({k: v for k, v in engine_overrides.items() if v is not None})

    if config.output_format not in OUTPUT_FORMATS:
        raise InvalidConfigError(
            f"Unknown output format '{config.output_format}' (use one of {', '.join(OUTPUT_FORMATS)})"
        )
    config.engine = EngineConfig().with_overrides(**engine)
    return config


def generate_sample_config() -> str:
    """
    Generate sample .jndm.yaml configuration.

    Returns:
        YAML string with sample config and comments
    """
    return """# JNDM Configuration

# Journal event log (overridden by JNDM_JOURNAL and --journal)
journal: 'journal.jnl'

# Output format: 'human' or 'json'
format: 'human'

# Decision engine (each key also has a JNDM_* environment variable)
engine:
  # Class-conditional estimator:
  # - 'frequency': c/N (collapses to 0 on unseen votes)
  # - 'paper-laplace': (c+1)/(N+1)
  # - 'lidstone': (c+lambda)/(N+2*lambda)
  smoothing: 'lidstone'
  lidstone_lambda: '1'

  # Prior: 'frequency' (acceptance rate of labeled articles) or 'smoothed'
  prior_mode: 'frequency'

  # Publish iff P(acceptable | reviews) > threshold
  threshold: '1/2'

  # Reviews on published articles before a reviewer's vote counts
  min_prior_reviews: 2

  # Reviews below which a due submission is rejected without prejudice
  min_reviews: 2

  # Epochs between submission and decision
  review_window: 3

  # Score each reviewer's self-work and others-work votes separately
  pseudo_reviewers: false

  # No eligible reviewer: 'prior' (posterior = prior) or 'review-majority'
  cold_start: 'prior'

  # Rated accept recommendations needed to enter the leaderboard
  min_rated: 1
"""
