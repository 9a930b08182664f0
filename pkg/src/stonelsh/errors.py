"""Exception types shared across the package."""


class StoneLshError(Exception):
    """Base class for all package errors."""


class NotPowerOfFour(StoneLshError):
    pass


class DimensionMismatch(StoneLshError):
    pass


class DimensionTooLargeForOracle(StoneLshError):
    pass


class InvalidConfig(StoneLshError):
    pass


class IndexOutOfRange(StoneLshError):
    pass


class EmptyDataset(StoneLshError):
    pass


class KTooLarge(StoneLshError):
    pass


class EmptyNeighborSet(StoneLshError):
    pass


class PositionOutOfArea(StoneLshError):
    pass


class MalformedCsv(StoneLshError):
    pass
