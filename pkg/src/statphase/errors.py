"""Exception hierarchy.

CLI exit codes map onto these: validation problems exit 2, truncation
problems exit 3, parse problems exit 4.
"""


class StatPhaseError(Exception):
    """Base class for all library errors."""


class MismatchedBasePoint(StatPhaseError, ValueError):
    pass


class DenominatorMismatch(StatPhaseError, ValueError):
    pass


class TruncationInsufficient(StatPhaseError):
    """The stored terms do not determine the requested quantity."""


class IndeterminateOrder(TruncationInsufficient):
    pass


class ZeroGerm(StatPhaseError, ValueError):
    pass


class OutOfSector(StatPhaseError, ValueError):
    pass


class BranchMismatch(StatPhaseError, ValueError):
    """A supplied argument lift is incompatible with the leading coefficient."""


class NotInvertible(StatPhaseError, ValueError):
    pass


class NoConvergence(StatPhaseError, RuntimeError):
    pass


class WrongSector(StatPhaseError, RuntimeError):
    pass


class InadmissibleGerm(StatPhaseError, ValueError):
    pass


class NonGenericDirection(StatPhaseError, ValueError):
    pass


class InvalidData(StatPhaseError, ValueError):
    pass


class GermSyntaxError(StatPhaseError, ValueError):
    """Malformed germ expression; ``position`` is the 0-based column."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at column {position})")
        self.position = position
