"""Exception hierarchy shared by all evanskit modules."""


class EvansKitError(Exception):
    """Base class for every error raised by evanskit."""


class DimensionError(EvansKitError, ValueError):
    pass


class NumericalError(EvansKitError):
    """A numerical procedure failed to reach its accuracy target."""


class SingularMatrix(NumericalError):
    def __init__(self, pivot, message=None):
        self.pivot = pivot
        super().__init__(message or f"matrix singular to tolerance (smallest pivot {pivot:.3e})")


class StiffnessError(NumericalError):
    pass


class ContourResolutionError(NumericalError):
    pass


class ResolutionError(NumericalError):
    pass


class TruncationError(NumericalError):
    def __init__(self, message, suggested_modes=None):
        self.suggested_modes = suggested_modes
        super().__init__(message)


class ConsistencyError(NumericalError):
    """Two independent evaluations of the same quantity disagree."""


class MonotonicityViolation(NumericalError):
    pass


class NotAnEigenvector(EvansKitError, ValueError):
    pass


class OnSpectrum(EvansKitError):
    """The requested point (or a contour sample) lies on a spectrum."""

    def __init__(self, message, lam=None):
        self.lam = lam
        super().__init__(message)


class DirichletEigenvalue(OnSpectrum):
    def __init__(self, lam):
        super().__init__(f"lambda={lam} is a Dirichlet eigenvalue to tolerance", lam)


class RobinEigenvalue(OnSpectrum):
    def __init__(self, lam, k=None):
        self.k = k
        where = "" if k is None else f" (mode {k})"
        super().__init__(f"lambda={lam} is a Robin eigenvalue to tolerance{where}", lam)


class ModeDirichletEigenvalue(OnSpectrum):
    def __init__(self, k, lam):
        self.k = k
        super().__init__(f"lambda={lam} is a Dirichlet eigenvalue of mode {k}", lam)


class ConfigError(EvansKitError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
