"""Engine configuration: smoothing, prior, threshold and lifecycle knobs."""

import dataclasses
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Mapping

from constants import (
    DEFAULT_LIDSTONE_LAMBDA,
    DEFAULT_MIN_PRIOR_REVIEWS,
    DEFAULT_MIN_RATED,
    DEFAULT_MIN_REVIEWS,
    DEFAULT_REVIEW_WINDOW,
    DEFAULT_THRESHOLD,
)
from journal.core.errors import InvalidConfigError
from utils.serialization import fraction_to_str, parse_fraction, sha256_digest


class Smoothing(Enum):
    FREQUENCY = "frequency"
    PAPER_LAPLACE = "paper-laplace"  # (c+1)/(N+1)
    LIDSTONE = "lidstone"            # (c+λ)/(N+2λ)


class PriorMode(Enum):
    FREQUENCY = "frequency"
    SMOOTHED = "smoothed"


class ColdStart(Enum):
    """What to do when no eligible reviewer contributes a factor."""
    PRIOR = "prior"
    REVIEW_MAJORITY = "review-majority"


@dataclass(frozen=True)
class EngineConfig:
    """Decision engine configuration.

    Rationals are held exactly; ``from_dict`` accepts "1/2", "0.5" or 0.5.
    """
    smoothing: Smoothing = Smoothing.LIDSTONE
    lidstone_lambda: Fraction = Fraction(DEFAULT_LIDSTONE_LAMBDA)
    prior_mode: PriorMode = PriorMode.FREQUENCY
    threshold: Fraction = Fraction(DEFAULT_THRESHOLD)
    min_prior_reviews: int = DEFAULT_MIN_PRIOR_REVIEWS
    min_reviews: int = DEFAULT_MIN_REVIEWS
    review_window: int = DEFAULT_REVIEW_WINDOW
    pseudo_reviewers: bool = False
    cold_start: ColdStart = ColdStart.PRIOR
    min_rated: int = DEFAULT_MIN_RATED

    def validate(self) -> "EngineConfig":
        """
        Check the invariants every consumer relies on.

        Returns:
            self, for chaining

        Raises:
            InvalidConfigError: If any field is out of range
        """
        if self.lidstone_lambda <= 0:
            raise InvalidConfigError(f"lidstone_lambda must be > 0, got {self.lidstone_lambda}")
        if not 0 < self.threshold < 1:
            raise InvalidConfigError(f"threshold must lie strictly between 0 and 1, got {self.threshold}")
        for name in ("min_prior_reviews", "min_reviews", "review_window", "min_rated"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidConfigError(f"{name} must be a non-negative integer, got {value!r}")
        return self

    def with_overrides(self, **overrides: Any) -> "EngineConfig":
        """Return a validated copy with the non-None overrides applied."""
        present = {k: v for k, v in overrides.items() if v is not None}
        if not present:
            return self
        merged = self.to_dict()
        merged.update(present)
        return EngineConfig.from_dict(merged)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-able form with exact rationals as "num/den" strings."""
        return {
            "smoothing": self.smoothing.value,
            "lidstone_lambda": fraction_to_str(self.lidstone_lambda),
            "prior_mode": self.prior_mode.value,
            "threshold": fraction_to_str(self.threshold),
            "min_prior_reviews": self.min_prior_reviews,
            "min_reviews": self.min_reviews,
            "review_window": self.review_window,
            "pseudo_reviewers": self.pseudo_reviewers,
            "cold_start": self.cold_start.value,
            "min_rated": self.min_rated,
        }

    def digest(self) -> str:
        return sha256_digest(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "EngineConfig":
        """
        Build a config from a mapping, validating every field.

        Args:
            data: Field name -> value (enum values as their strings)

        Returns:
            Validated EngineConfig

        Raises:
            InvalidConfigError: On unknown keys or invalid values
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfigError(f"Unknown engine config keys: {', '.join(unknown)}")

        kwargs: Dict[str, Any] = {}
        try:
            for key, value in data.items():
                if key == "smoothing":
                    kwargs[key] = value if isinstance(value, Smoothing) else Smoothing(value)
                elif key == "prior_mode":
                    kwargs[key] = value if isinstance(value, PriorMode) else PriorMode(value)
                elif key == "cold_start":
                    kwargs[key] = value if isinstance(value, ColdStart) else ColdStart(value)
                elif key in ("lidstone_lambda", "threshold"):
                    kwargs[key] = parse_fraction(value)
                elif key == "pseudo_reviewers":
                    kwargs[key] = _parse_bool(value)
                else:
                    kwargs[key] = _parse_int(value)
        except ValueError as e:
            raise InvalidConfigError(f"Invalid engine config value: {e}") from e

        return cls(**kwargs).validate()


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "1", "yes", "on"):
        return True
    if isinstance(value, str) and value.lower() in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _parse_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"not an integer: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value)
    raise ValueError(f"not an integer: {value!r}")
