"""Numerical mean curvature of submanifolds in Randers spaces given by navigation data."""

from .errors import GeometryError
from .geometry import DiffKernel, MetricField, VectorField, christoffel, is_killing, riemann, sectional_curvature
from .hyperbolic import (
    LorentzPoint,
    MixedKillingField,
    RotationalSurface,
    chart_navigation,
    hyperboloid_chart,
    in_omega,
    rotational_normal,
    surface_point,
)
from .immersion import Immersion, ImmersionJet2, InducedGeometry, induced_geometry
from .mean_curvature import (
    hypersurface_mean_value,
    mean_form_general,
    mean_form_killing,
    mean_form_oracle,
    mean_value_BH,
    mean_value_hypersurface,
)
from .measure import MeasureSpec, NavigationData, density, frak_s, phi, randers_norm
from .mesh import SurfaceMesh, build_profile, generate_mesh
from .profiles import (
    ArcLengthProfile,
    ClosedFormProfile,
    SpecialProfile,
    closed_form_x1,
    energy,
    linear_profile,
    minimal_residual,
    ode_integrate,
    phi_of_s,
    rotational_H,
)

__version__ = "0.1.0"
