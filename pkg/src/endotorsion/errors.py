"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: IdentityViolation -> 1,
ParseError -> 2, CapExceeded -> 3.
"""


class EndoTorsionError(Exception):
    """Base class for all package errors."""


class CapExceeded(EndoTorsionError):
    """A resource cap was hit (rational factorization degree cap)."""


class ParseError(EndoTorsionError, ValueError):
    """Malformed text or JSON input; carries a human-readable position."""


class IdentityViolation(EndoTorsionError):
    """A theorem-backed identity failed; indicates an implementation bug."""
