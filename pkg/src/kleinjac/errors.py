"""Exception hierarchy.

Every failure raised by the library derives from :class:`KleinJacError` so
callers (the CLI in particular) can map whole families to exit codes.
"""


class KleinJacError(Exception):
    """Base class for all library errors."""


class CurveError(KleinJacError, ValueError):
    """The polynomial does not define a valid imaginary hyperelliptic curve."""


class DegenerateCurve(CurveError):
    pass


class OddDegree(CurveError):
    pass


class OrientableCover(CurveError):
    pass


class RealBranchPoint(CurveError):
    pass


class RepeatedRoot(CurveError):
    pass


class PathError(KleinJacError):
    pass


class BranchTooClose(PathError):
    pass


class SheetMismatch(PathError):
    pass


class TopologyError(KleinJacError):
    pass


class CutCollision(TopologyError):
    """No collision-free routing of the generating loops was found."""


class NonTransversal(TopologyError):
    pass


class NonIntegralCoefficient(TopologyError):
    pass


class FixedRankDeficient(TopologyError):
    pass


class QuadratureStall(KleinJacError):
    pass


class SingularPeriodBlock(KleinJacError):
    pass


class DivisorError(KleinJacError, ValueError):
    pass


class BranchValue(DivisorError):
    pass


class DegreeNonzero(DivisorError):
    pass


class JacobianError(KleinJacError):
    pass


class RankDeficient(JacobianError):
    pass


class GenusTooLarge(JacobianError):
    pass


class NotSigmaInvariant(JacobianError, ValueError):
    pass
