"""Exception types shared across the toolkit.

Every error that a caller may want to catch programmatically has its own
class; all inherit from QTubeError so `except QTubeError` catches the lot.
"""


class QTubeError(Exception):
    """Base class for all toolkit errors."""


class DomainError(QTubeError):
    """Chart coordinates outside the declared chart domain."""


class RankDeficient(QTubeError):
    """Jacobian rank below the base dimension: not an immersion there."""


class GridTooCoarse(QTubeError):
    """A finite-difference stencil does not fit inside the sampled grid."""


class NonPositive(QTubeError):
    """A quantity that must be strictly positive is not."""


class OutsideTube(QTubeError):
    """Fiber coordinates at or beyond the tube radius."""


class Inadmissible(QTubeError):
    """Tube point where the radial admissibility condition fails."""


class Singular(QTubeError):
    """Singular horizontal metric block: the point is not admissible."""


class QuadratureNotConverged(QTubeError):
    """Two quadrature refinement levels disagree beyond tolerance."""


class DimensionError(QTubeError):
    """Operation requested for an incompatible dimension."""


class DegenerateSample(QTubeError):
    """All samples fall below the significance threshold."""


class NoConvergence(QTubeError):
    """An iterative solve failed to converge."""


class NotAnnulus(QTubeError):
    """Outer capacity radius does not exceed the inner radius."""


class ExtrapolationUnstable(QTubeError):
    """Successive extrapolation estimates disagree beyond tolerance."""


class A2Violated(QTubeError):
    """Extrinsic curvature does not decay below the admissible level."""


class TailDominates(QTubeError):
    """Truncation-tail bound exceeds the computed integral."""


class NoNegativeQ(QTubeError):
    """No searched test function produced a negative quadratic form."""


class DegenerateCoupling(QTubeError):
    """Perturbative coupling term vanishes for every searched bump."""


class OutOfBudget(QTubeError):
    """Requested discretization exceeds the configured node budget."""


class ConfigError(QTubeError):
    """Invalid run configuration."""
