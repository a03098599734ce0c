"""
JNDM Constants - Centralized Configuration

All magic numbers, strings, and configuration values should be defined here.
This prevents scattered configuration and makes values easy to update.
"""

from pathlib import Path

# ==============================================================================
# Application Metadata
# ==============================================================================

APP_NAME = "JNDM"
APP_VERSION = "0.1.0"  # Single source of truth for version
APP_DESCRIPTION = "Democratic peer-review journal engine and mechanism simulator"

# ==============================================================================
# Journal Files
# ==============================================================================

DEFAULT_JOURNAL_PATH = "journal.jnl"
LOCK_SUFFIX = ".lock"

# Event log schema version (written into record 1)
SCHEMA_VERSION = 1

# ==============================================================================
# Identifier Prefixes
# ==============================================================================

SUBMISSION_ID_PREFIX = "S"
ARTICLE_ID_PREFIX = "A"
AGENT_ID_PREFIX = "U"

# ==============================================================================
# Engine Defaults
# ==============================================================================

DEFAULT_REVIEW_WINDOW = 3        # epochs between submission and decision
DEFAULT_MIN_REVIEWS = 2          # below this a submission is rejected without prejudice
DEFAULT_MIN_PRIOR_REVIEWS = 2    # reviews on published articles before a vote counts
DEFAULT_THRESHOLD = "1/2"
DEFAULT_LIDSTONE_LAMBDA = "1"
DEFAULT_MIN_RATED = 1            # accept recommendations needed to enter the leaderboard

# Absolute tolerance for normalization and float/exact agreement
POSTERIOR_TOLERANCE = 1e-12

# ==============================================================================
# Simulator Defaults
# ==============================================================================

DEFAULT_SIM_SEED = 0
DEFAULT_REVIEWER_CAPACITY = 4
DEFAULT_PLUGIN_SIGNAL_ACCURACY = 0.8
DEFAULT_HIGH_COMPETENCE = 0.8
DEFAULT_REPLICATION_WORKERS = 4

# ==============================================================================
# Environment Variables
# ==============================================================================

ENV_JOURNAL = "JNDM_JOURNAL"
ENV_SMOOTHING = "JNDM_SMOOTHING"
ENV_LAMBDA = "JNDM_LAMBDA"
ENV_THRESHOLD = "JNDM_THRESHOLD"
ENV_MIN_REVIEWS = "JNDM_MIN_REVIEWS"
ENV_MIN_PRIOR_REVIEWS = "JNDM_MIN_PRIOR_REVIEWS"
ENV_PSEUDO_REVIEWERS = "JNDM_PSEUDO_REVIEWERS"
ENV_REVIEW_WINDOW = "JNDM_REVIEW_WINDOW"

# ==============================================================================
# CLI
# ==============================================================================

EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2

OUTPUT_HUMAN = "human"
OUTPUT_JSON = "json"
OUTPUT_FORMATS = (OUTPUT_HUMAN, OUTPUT_JSON)

# Decimal places when printing posteriors next to their exact rational
FLOAT_DECIMALS = 6

DEFAULT_LEADERBOARD_SIZE = 10

# ==============================================================================
# File Names
# ==============================================================================

CONFIG_FILE_NAME = ".jndm.yaml"


def get_lock_path(journal_path: Path) -> Path:
    """Get the advisory lock file path for a journal file."""
    return journal_path.with_name(journal_path.name + LOCK_SUFFIX)
