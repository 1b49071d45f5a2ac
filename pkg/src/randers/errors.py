"""Exception types raised by the geometry engine."""


class GeometryError(ValueError):
    """Base class for all numerical-geometry failures."""


class DegenerateMetricError(GeometryError):
    def __init__(self, point, min_eig):
        self.point = point
        self.min_eig = min_eig
        super().__init__(f"degenerate metric at {list(point)} (smallest eigenvalue {min_eig:.3e})")


class DegeneratePlaneError(GeometryError):
    pass


class DegenerateJetError(GeometryError):
    pass


class OutsideRandersDomainError(GeometryError):
    pass


class InvalidFrakSError(GeometryError):
    pass


class NotKillingError(GeometryError):
    def __init__(self, residual, tol):
        self.residual = residual
        super().__init__(f"wind is not Killing at this point (residual {residual:.3e} > tol {tol:.1e})")


class ZeroVectorError(GeometryError):
    pass


class OracleIllConditionedError(GeometryError):
    pass


class DegenerateFrameError(GeometryError):
    pass


class DegenerateFirstIntegralError(GeometryError):
    pass


class SolvabilityError(GeometryError):
    pass


class QuadratureError(GeometryError):
    pass


class ProfileDomainError(GeometryError):
    pass


class EmptyRegionError(GeometryError):
    pass
