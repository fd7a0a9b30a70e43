"""Exception hierarchy shared by every module of the package."""


class MinHomologyError(Exception):
    """Base class for all package errors."""


class InvalidDimension(MinHomologyError):
    pass


class DimensionMismatch(MinHomologyError):
    pass


class InvalidComplex(MinHomologyError):
    pass


class ZeroAreaSimplex(MinHomologyError):
    """A simplex has (numerically) zero measure, so the weight matrix is singular."""

    def __init__(self, indices, message=None):
        self.indices = list(indices)
        if message is None:
            shown = ", ".join(str(i) for i in self.indices[:10])
            more = "" if len(self.indices) <= 10 else f" (+{len(self.indices) - 10} more)"
            message = f"degenerate simplices with zero measure: {shown}{more}"
        super().__init__(message)


class NotHomologous(MinHomologyError):
    """The cycle difference is not a boundary."""


class LpNumericalFailure(MinHomologyError):
    pass


class MalformedPly(MinHomologyError):
    pass


class NonTriangleFace(MalformedPly):
    pass


class IndexOutOfRange(MalformedPly):
    pass


class MalformedSpec(MinHomologyError):
    pass


class MissingEdge(MalformedSpec):
    def __init__(self, pair, loop_index=None):
        self.pair = tuple(pair)
        self.loop_index = loop_index
        where = "" if loop_index is None else f" in loop {loop_index}"
        super().__init__(f"vertices {self.pair[0]} and {self.pair[1]} are not joined by an edge{where}")


class Infeasible(MinHomologyError):
    """Raised by the exact oracle when no bounding chain exists."""


class TooLarge(MinHomologyError):
    pass
