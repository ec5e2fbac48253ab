"""Exception hierarchy for sgbeam."""


class BeamError(Exception):
    """Base class for all errors raised by sgbeam."""


class InvalidParameterError(BeamError, ValueError):
    pass


class DegenerateModelError(BeamError, ValueError):
    """Raised when the higher-order stiffness vanishes (classical beam limit)."""


class GridMismatchError(BeamError, ValueError):
    pass


class RootPairingError(BeamError):
    """Characteristic roots fail the residual test or the negation closure."""


class RadicandError(BeamError, ValueError):
    """The large-frequency root approximation needs 27 zeta^2 lambda^2 > 2."""


class DegenerateRootsError(BeamError):
    """Two characteristic roots coincide; the exponential fundamental set is singular."""


class PhaseTrackingError(BeamError):
    """The determinant left the reference phase line inside a bracket."""


class MissedRootError(BeamError):
    """A bracket held zero or several sign changes of the root indicator."""


class PrecisionExhaustedError(BeamError):
    def __init__(self, message, max_modes=None):
        super().__init__(message)
        self.max_modes = max_modes


class NonSimpleEigenvalueError(BeamError):
    pass


class ImaginaryPartError(BeamError):
    """An eigenfunction evaluated to a value with a non-negligible imaginary part."""


class ZeroNormError(BeamError):
    pass


class IllConditionedError(BeamError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class InsufficientModesError(BeamError, ValueError):
    pass


class TruncationError(BeamError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
