"""Serialization utilities shared by the event log, digests and CLI output."""

import hashlib
import json
import re
from fractions import Fraction
from typing import Any, List, Tuple, Union

_NATURAL_SPLIT = re.compile(r"(\d+)")


def fraction_to_str(value: Fraction) -> str:
    """
    Serialize a rational as an exact "num/den" string.

    The denominator is always written, so 1 becomes "1/1".

    Args:
        value: Rational to serialize

    Returns:
        String of the form "num/den"
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int, float, Fraction]) -> Fraction:
    """
    Parse a rational from "num/den", a decimal string, an int or a float.

    Floats are converted through their shortest decimal representation so
    that 0.1 parses as 1/10 rather than its binary expansion.

    Args:
        text: Value to parse

    Returns:
        Exact rational

    Raises:
        ValueError: If the value is not a valid rational
    """
    if isinstance(text, bool):
        raise ValueError(f"Not a number: {text!r}")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        return Fraction(repr(text))
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not a rational number: {text!r}") from e


def canonical_json(data: Any) -> str:
    """Compact, key-sorted JSON used for digests."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_digest(data: Any) -> str:
    """
    SHA-256 hex digest of the canonical JSON encoding of data.

    Args:
        data: JSON-serializable value

    Returns:
        Lowercase hex digest
    """
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def natural_key(identifier: Any) -> Tuple[Any, ...]:
    """
    Sort key that orders "S2" before "S10".

    Args:
        identifier: Identifier (anything with a str form)

    Returns:
        Tuple alternating text and integer chunks
    """
    parts: List[Any] = []
    for chunk in _NATURAL_SPLIT.split(str(identifier)):
        if chunk.isdigit():
            parts.append((1, int(chunk), ""))
        elif chunk:
            parts.append((0, 0, chunk))
    return tuple(parts)


def format_probability(value: Fraction, decimals: int = 6) -> str:
    """Format a rational as "num/den (0.xxxxxx)" for human output."""
    return f"{fraction_to_str(value)} ({float(value):.{decimals}f})"
