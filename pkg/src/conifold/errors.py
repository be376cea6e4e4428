class ConifoldError(ValueError):
    """Base class for invalid input to the conifold routines."""


class DimensionMismatchError(ConifoldError):
    pass


class RankDeficiencyError(ConifoldError):
    pass


class MissingDataError(ConifoldError):
    pass


class IsotropyError(ConifoldError):
    pass


class DegeneratePairingError(ConifoldError):
    pass
