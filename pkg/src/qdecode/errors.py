"""Exception hierarchy shared by every module."""


class QDecodeError(Exception):
    """Base class for all package errors."""


class ContractError(QDecodeError):
    """An input violates a documented precondition (not Hermitian, not unitary, ...)."""


class DomainError(QDecodeError, ValueError):
    """A scalar parameter lies outside the admissible range."""


class SizeError(QDecodeError):
    """A dimension would exceed the configured cap."""


class DegeneracyError(QDecodeError):
    """A set of vectors that must be linearly independent is not."""

    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


class SubspaceViolation(QDecodeError):
    """A state carries amplitude outside the operational subspace of a gate."""


class InfeasibleError(QDecodeError):
    """No admissible solution exists for a timing or phase condition."""

    def __init__(self, message, tried=()):
        super().__init__(message)
        self.tried = tuple(tried)


class ConfigError(QDecodeError):
    """A run configuration is malformed or inconsistent."""
