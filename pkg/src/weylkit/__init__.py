"""Exact-arithmetic toolkit for model apartments, orbit hulls, path folding,
rank-one trees and twisted valuations."""

from .root_system import RootSystem, RootSystemError, WeylElement, build
from .scalars import (
    INF,
    Infinity,
    LexPair,
    NFElem,
    NumberField,
    QuadInt,
    ScalarDomainError,
    compare,
    lex,
    scalar_mul,
    sign,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Infinity",
    "LexPair",
    "NFElem",
    "NumberField",
    "QuadInt",
    "RootSystem",
    "RootSystemError",
    "ScalarDomainError",
    "WeylElement",
    "build",
    "compare",
    "lex",
    "scalar_mul",
    "sign",
    "__version__",
]
