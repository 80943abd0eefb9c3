"""Exception hierarchy shared by every entanglekit module."""


class EntangleKitError(ValueError):
    """Base class for all input and numeric errors raised by entanglekit."""


class NotSquare(EntangleKitError):
    pass


class NotHermitian(EntangleKitError):
    pass


class NotPSD(EntangleKitError):
    pass


class InvalidState(EntangleKitError):
    """A state violates one of its invariants (hermiticity, trace, positivity)."""


class ZeroVector(EntangleKitError):
    pass


class DimensionMismatch(EntangleKitError):
    pass


class ParameterOutOfRange(EntangleKitError):
    pass


class MalformedSpectrum(EntangleKitError):
    pass


class MalformedProfile(EntangleKitError):
    pass


class NotApplicable(EntangleKitError):
    """The requested criterion or measure does not apply to these dimensions."""


class UnknownMeasure(EntangleKitError):
    pass
