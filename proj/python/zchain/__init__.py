"""Z-chain structures, definitional dictionaries and oracle guessing."""

from ._core import (
    Fragment,
    InteriorViolation,
    Oracle,
    ParseError,
    PreconditionError,
    ZchainError,
    check_indiscernability,
    dictionary_names,
    guess,
    is_mutually_algebraic,
    parse,
    radius,
    to_prenex,
    translate,
    tree_contains,
    tree_leftmost,
    warmup,
)

__all__ = [
    "Fragment",
    "InteriorViolation",
    "Oracle",
    "ParseError",
    "PreconditionError",
    "ZchainError",
    "check_indiscernability",
    "dictionary_names",
    "guess",
    "is_mutually_algebraic",
    "parse",
    "radius",
    "to_prenex",
    "translate",
    "tree_contains",
    "tree_leftmost",
    "warmup",
]
