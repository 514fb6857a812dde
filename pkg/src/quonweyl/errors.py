"""Exception hierarchy shared by all quonweyl modules."""


class QuonWeylError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QuonWeylError):
    """Array or vector shapes do not match the declared number of modes."""


class QDomainError(QuonWeylError):
    """A deformation parameter q_i lies outside the closed interval [-1, 1]."""


class CommFactorError(QuonWeylError):
    """The exchange-phase matrix violates b_ij * b_ji = 1 or b_ii = 1."""


class ThetaError(QuonWeylError):
    """An integer phase matrix is not antisymmetric modulo the given order."""


class SlotError(QuonWeylError):
    """A tensor operator was used with an incompatible slot signature."""


class SizeCapError(QuonWeylError):
    """A requested dense operator would exceed the configured size cap."""


class SingularError(QuonWeylError):
    """A braiding requires inverting a cross operator that is singular."""


class CapError(QuonWeylError):
    """A word or polynomial exceeded the configured length or term cap."""


class TruncationError(QuonWeylError):
    """A creation operator was applied at the top degree of a truncated space."""


class WordSyntaxError(QuonWeylError):
    """A generator word or occupation state could not be parsed."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column
