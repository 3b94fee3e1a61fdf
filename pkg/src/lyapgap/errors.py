"""Exception hierarchy.

Every error carries a short ``kind`` string; the command-line front end
reports it verbatim in its machine-readable error JSON.
"""


class LyapgapError(Exception):
    """Base class for all errors raised by this package."""

    kind = "Error"

    def __init__(self, detail="", **context):
        super().__init__(detail)
        self.detail = detail
        self.context = context


# chain construction and measures
class NonStochasticError(LyapgapError, ValueError):
    kind = "NonStochastic"


class NegativeEntryError(LyapgapError, ValueError):
    kind = "NegativeEntry"


class DimensionMismatchError(LyapgapError, ValueError):
    kind = "DimensionMismatch"


class InvalidMeasureError(LyapgapError, ValueError):
    kind = "InvalidMeasure"


class NotInvariantError(LyapgapError, ValueError):
    kind = "NotInvariant"


class NonUniqueError(LyapgapError, ValueError):
    kind = "NonUnique"


class NoConvergenceError(LyapgapError, RuntimeError):
    kind = "NoConvergence"


class ZeroMassStateError(LyapgapError, ValueError):
    kind = "ZeroMassState"


# certificates
class InvalidLyapunovError(LyapgapError, ValueError):
    kind = "InvalidLyapunov"


class NoDriftOutsideKError(LyapgapError, ValueError):
    kind = "NoDriftOutsideK"


class ZeroOverlapError(LyapgapError, ValueError):
    kind = "ZeroOverlap"


class EmptyLevelSetError(LyapgapError, ValueError):
    kind = "EmptyLevelSet"


# bounds
class InvalidInputError(LyapgapError, ValueError):
    kind = "InvalidInput"


class SetMismatchError(LyapgapError, ValueError):
    kind = "SetMismatch"


class NotPSDError(LyapgapError, ValueError):
    kind = "NotPSD"


class Assumption3ViolatedError(LyapgapError, ValueError):
    kind = "Assumption3Violated"


class ConstantsMismatchError(LyapgapError, ValueError):
    kind = "ConstantsMismatch"


class NotFullSpaceError(LyapgapError, ValueError):
    kind = "NotFullSpace"


# spectrum
class NotReversibleError(LyapgapError, ValueError):
    kind = "NotReversible"


class EigenFailureError(LyapgapError, RuntimeError):
    kind = "EigenFailure"


class EmptyKError(LyapgapError, ValueError):
    kind = "EmptyK"


class ZeroPiOnKError(LyapgapError, ValueError):
    kind = "ZeroPiOnK"


# continuum kernels
class GridTooNarrowError(LyapgapError, ValueError):
    kind = "GridTooNarrow"


class GridTooCoarseError(LyapgapError, ValueError):
    kind = "GridTooCoarse"


class EpsilonOutOfRangeError(LyapgapError, ValueError):
    kind = "EpsilonOutOfRange"


class AssumptionUViolatedError(LyapgapError, ValueError):
    kind = "AssumptionUViolated"


# front end
class EpsOutOfRangeError(LyapgapError, ValueError):
    kind = "EpsOutOfRange"


class UnsoundBoundError(LyapgapError, RuntimeError):
    kind = "UnsoundBound"
