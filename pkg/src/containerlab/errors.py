"""Exception hierarchy shared by every module."""


class LabError(Exception):
    """Base class for all errors raised by containerlab."""


class TooLarge(LabError):
    """An instance exceeds a feasibility cap."""


class NotC4Free(LabError):
    pass


class NotSubgraph(LabError):
    pass


class NotIndependent(LabError):
    pass


class NotReplayable(LabError):
    pass


class FingerprintOverflow(LabError):
    pass


class UnsupportedFieldOrder(LabError):
    pass


class EmptyVertexSet(LabError):
    pass


class ZeroAverageDegree(LabError):
    pass


class EmptySet(LabError):
    pass


class EmptyColumn(LabError):
    pass


class TooSmallS(LabError):
    pass


class TooSparse(LabError):
    pass


class DeltaOutOfRange(LabError):
    pass


class InvalidParameter(LabError, ValueError):
    pass


class InvalidConfig(LabError, ValueError):
    pass
