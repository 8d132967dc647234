"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidParams(GeometryError):
    """Constructor parameters violate a family's admissibility constraints."""


class InvalidGauge(GeometryError):
    """The requested profile cannot exist under the given gauge constraint."""


class DegenerateCurve(GeometryError):
    """A coordinate circle (or similar construction) has null tangent."""


class FrameDegenerate(GeometryError):
    """Position and tangent fail to span a plane; the normal is undefined."""


class IntegrationFailure(GeometryError):
    """An ODE integration could not be completed (step underflow etc.)."""


class DomainExit(GeometryError):
    """Evaluation left the admissible interval of a profile family.

    Attributes:
        t: the offending radius value.
        admissible: tuple of (lo, hi) pairs where the radicand is nonnegative.
    """

    def __init__(self, msg, t=None, admissible=()):
        super().__init__(msg)
        self.t = t
        self.admissible = tuple(admissible)


class GaugeViolation(GeometryError):
    """Quadrature drift broke the profile's gauge constraint."""


class GaugeBoundary(GeometryError):
    """A gauge square root (f'^2 - 1 or 1 - f'^2) vanished or went negative."""


class LightlikeH(GeometryError):
    """<H, H> = 0: the normalized mean curvature direction is undefined."""


class ZeroH(GeometryError):
    """The mean curvature vector vanishes; the surface is minimal there."""


class SignatureError(GeometryError):
    """The induced metric is not Lorentzian at the sampled point."""


class DegenerateTangent(GeometryError):
    """The tangent Gram matrix is (numerically) singular."""
