"""Exception types shared across the package."""

from __future__ import annotations


class AvcyclicError(Exception):
    """Base class for all package errors."""


class InputError(AvcyclicError, ValueError):
    """Invalid input rejected at a module boundary.

    ``code`` is a short machine-readable tag; the message stays human
    oriented.  The CLI maps these to exit code 2 (malformed input) or 1
    (well-formed input refused on mathematical grounds, e.g. a reducible
    polynomial handed to the classifier).
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class CapabilityError(AvcyclicError):
    """A request outside the supported desk-scale envelope (degree caps,
    disabled network access, unsupported dimension)."""


class DegenerateLatticeError(AvcyclicError):
    """Generating set does not span a full-rank lattice."""

    def __init__(self, message: str = "degenerate lattice"):
        super().__init__(message)


class ConsistencyError(AvcyclicError):
    """Two routes that must agree disagreed.  Indicates a kernel bug, never
    a user error; the CLI maps this to exit code 3."""
