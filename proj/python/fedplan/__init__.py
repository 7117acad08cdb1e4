"""Static analysis and load-strategy simulation for module federations."""

from ._core import (
    Federation,
    FedError,
    Version,
    VersionRange,
    highest_satisfying,
    intersect,
    is_subtype,
    parse_range,
    parse_version,
    satisfies,
    validate_manifest,
)

STRATEGIES = ("lazy", "prefetch", "eager", "ssr")

__all__ = [
    "Federation",
    "FedError",
    "STRATEGIES",
    "Version",
    "VersionRange",
    "highest_satisfying",
    "intersect",
    "is_subtype",
    "parse_range",
    "parse_version",
    "satisfies",
    "validate_manifest",
]
