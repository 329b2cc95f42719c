"""Exception hierarchy.

Precondition failures map to CLI exit code 2, verification failures to 3.
"""


class LagfillError(Exception):
    """Base class; ``payload`` carries measured values for error reports."""

    exit_code = 1

    def __init__(self, message: str = "", **payload):
        super().__init__(message)
        self.payload = payload

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), **self.payload}


class PreconditionError(LagfillError):
    exit_code = 2


class VerificationError(LagfillError):
    exit_code = 3


# geometry
class WrongPlaneKind(PreconditionError):
    pass


class DegenerateFrame(PreconditionError):
    pass


class KindViolation(PreconditionError):
    pass


class NonTransversalPlanes(PreconditionError):
    pass


# curves
class NotPlanar(PreconditionError):
    pass


class EndpointMismatch(PreconditionError):
    pass


class AlreadyClosed(PreconditionError):
    pass


class EndpointsNotOnGamma(PreconditionError):
    pass


# surfaces
class UnknownEdge(PreconditionError):
    pass


class MissingRole(PreconditionError):
    pass


# homotopies
class PreconditionViolated(PreconditionError):
    pass


class NotClosed(PreconditionError):
    pass


class NotBasedAtOrigin(PreconditionError):
    pass


class WrongPlane(PreconditionError):
    pass


class NonZeroSymplecticArea(PreconditionError):
    pass


class CurveMismatch(PreconditionError):
    pass


# filler
class ResidualExceeded(VerificationError):
    pass
