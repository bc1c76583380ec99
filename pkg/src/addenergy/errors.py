"""Exception hierarchy.

Every exception carries an ``exit_code`` so the command line can map
failures onto its documented status codes without a lookup table.
"""


class AddEnergyError(Exception):
    exit_code = 1


class UsageError(AddEnergyError, ValueError):
    """Bad arguments: mismatched groups, unknown names, malformed files."""

    exit_code = 2


class DomainError(UsageError):
    """Input outside the mathematical domain of an operation."""


class ConfigError(UsageError):
    """Generator or pipeline parameters that cannot be satisfied."""


class UnsupportedSpecError(UsageError):
    """Operation not defined for the given group family."""


class CapacityError(AddEnergyError):
    """An exact computation would exceed a configured cap.

    Raised instead of silently falling back to a heuristic answer.
    """

    exit_code = 3


class GuardTripError(AddEnergyError, RuntimeError):
    """An algorithm loop exceeded its provable iteration bound."""

    exit_code = 1
