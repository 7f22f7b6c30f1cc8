"""Exception types raised by planemono."""


class PlanemonoError(Exception):
    """Base class for all errors raised by this package."""


class GraphValidationError(PlanemonoError, ValueError):
    """A dual graph violates one or more structural invariants.

    ``problems`` holds one human readable line per violated invariant.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems) or "invalid graph")


class NonIntegralMultiplicity(PlanemonoError, ValueError):
    pass


class NonPositiveMultiplicity(PlanemonoError, ValueError):
    pass


class PositiveGenusUnsupported(PlanemonoError, ValueError):
    pass


class ClosedStratum(PlanemonoError, ValueError):
    pass


class NotSeparated(PlanemonoError, ValueError):
    pass


class NonIntegralColumn(PlanemonoError, ValueError):
    pass


class MissingAmple(PlanemonoError, ValueError):
    pass


class SearchBoundExceeded(PlanemonoError, ValueError):
    pass


class MissingFirstBlowupTag(PlanemonoError, ValueError):
    pass


class DomainError(PlanemonoError, ValueError):
    pass


class SeparationViolated(PlanemonoError):
    """Raised with the offending sample attached as ``witness``."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class IdentityViolated(PlanemonoError, AssertionError):
    """A numeric identity check failed; ``worst`` describes the worst sample."""

    def __init__(self, message, worst=None):
        self.worst = worst
        super().__init__(message)


class SchemaError(PlanemonoError, ValueError):
    pass


class InvalidParams(PlanemonoError, ValueError):
    pass
