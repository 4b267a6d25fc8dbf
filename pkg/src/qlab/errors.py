"""Exception types shared across the lab."""


class QlabError(Exception):
    """Base class for all lab-specific failures."""


class NonConvexInput(QlabError):
    """Vertices or support samples do not describe a convex body."""


class OriginNotInterior(QlabError):
    """The origin is not strictly inside the domain."""


class NormalizationFailure(QlabError):
    """No normalization exponent M <= 62 fits the domain."""


class DegenerateArc(QlabError):
    """The lower boundary arc does not span [-1, 1]."""


class ZeroArgument(QlabError):
    """Gradient requested at the origin."""


class InvalidDelta(QlabError):
    """Cap or partition width must be positive."""


class ResolutionTooCoarse(QlabError):
    """Candidate cap arcs are too short for the angle grid."""


class NonConvexArc(QlabError):
    """One-sided derivative monotonicity violated beyond tolerance."""


class ArcTooCoarse(QlabError):
    """Surrogate grid intervals too small for the quadrature tolerance."""


class BudgetExceeded(QlabError):
    """Vertex or node budget exhausted."""


class InvalidScale(QlabError):
    """Dilation parameter must be positive."""


class TailNotDecaying(QlabError):
    """Fourier-tail integrand is not decreasing; grid too short."""


class AliasingRisk(QlabError):
    """Multiplier support does not fit the frequency grid with margin."""


class QuadratureBudget(QlabError):
    """Oscillatory quadrature node count exceeded the budget."""


class CubeTooSmall(QlabError):
    """Atom cube has fewer than 8 samples per side."""


class TGridTooCoarse(QlabError):
    """Square-function t-grid has adjacent ratios above 2**(1/4)."""


class ConfigError(QlabError):
    """Experiment config fails schema validation."""
