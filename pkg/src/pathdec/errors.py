"""Exception types shared across the package."""

from __future__ import annotations


class PathDecError(Exception):
    """Base class for all errors raised by pathdec."""


class ContractViolation(PathDecError):
    """A documented precondition of an operation does not hold.

    ``details`` carries whatever diagnostic data the raising site has
    (witness vertices, candidate counts, ...).
    """

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class StructureBuildError(PathDecError):
    """An absorbing structure could not be built within the retry budget."""

    def __init__(self, message: str, vertex: int, candidates: int, lemma: str):
        super().__init__(message)
        self.vertex = vertex
        self.candidates = candidates
        self.lemma = lemma


class AbsorptionError(PathDecError):
    """An absorption procedure hit a breached precondition at runtime."""

    def __init__(self, message: str, lemma: str, **witness):
        super().__init__(message)
        self.lemma = lemma
        self.witness = witness


class OracleCapExceeded(PathDecError):
    """The brute-force oracle refuses inputs above its edge cap."""
