"""Exception hierarchy.  Everything raised for bad input derives from ThetaError."""


class ThetaError(ValueError):
    pass


class DimensionMismatch(ThetaError):
    pass


class NotSymmetric(ThetaError):
    pass


class NotPositiveDefinite(ThetaError):
    def __init__(self, minor_index, minor_value):
        self.minor_index = minor_index
        self.minor_value = minor_value
        super().__init__(
            f"not positive definite: leading principal minor {minor_index} "
            f"is {minor_value}"
        )


class NotUnimodular(ThetaError):
    pass


class UnknownLattice(ThetaError):
    pass


class NoMatch(ThetaError):
    pass


class Ambiguous(ThetaError):
    def __init__(self, message, candidates=()):
        self.candidates = list(candidates)
        super().__init__(message)
