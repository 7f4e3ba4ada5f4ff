"""Polyform enumeration on periodic tilings with exact rational coordinates."""

from .canonical import CanonicalForm, SymmetryMode, canonical_form, parse_form
from .enumeration import EnumerationResult, MemoryLimitExceeded, brute_oracle, enumerate_counts
from .exact import AffineMap, DimensionMismatch, SingularMatrix, parse_point, parse_rat
from .tiling import (
    BUILTIN_NAMES,
    NotACell,
    TilingParseError,
    TilingSpec,
    load_builtin,
    parse_tiling,
    resolve_tiling,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BUILTIN_NAMES",
    "CanonicalForm",
    "DimensionMismatch",
    "EnumerationResult",
    "MemoryLimitExceeded",
    "NotACell",
    "SingularMatrix",
    "SymmetryMode",
    "TilingParseError",
    "TilingSpec",
    "brute_oracle",
    "canonical_form",
    "enumerate_counts",
    "load_builtin",
    "parse_form",
    "parse_point",
    "parse_rat",
    "parse_tiling",
    "resolve_tiling",
    "validate",
]
