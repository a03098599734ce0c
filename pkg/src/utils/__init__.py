"""Utils package initialization."""

from utils.file_io import (
    FileIOError,
    append_lines,
    ensure_parent_dir,
    safe_read_text,
    safe_write_json,
    safe_write_text,
)
from utils.serialization import (
    canonical_json,
    format_probability,
    fraction_to_str,
    natural_key,
    parse_fraction,
    sha256_digest,
)

__all__ = [
    # File I/O
    "FileIOError",
    "append_lines",
    "ensure_parent_dir",
    "safe_read_text",
    "safe_write_json",
    "safe_write_text",
    # Serialization
    "canonical_json",
    "format_probability",
    "fraction_to_str",
    "natural_key",
    "parse_fraction",
    "sha256_digest",
]
