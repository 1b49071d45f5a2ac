"""Hyperbolic 3-space H^3 in Minkowski space L^4 with a Killing wind of mixed S/J type.

Points are 4-vectors with signature (-, +, +, +).  The chart used by the
general engine is ``u = (p2, p3, p4)``; a tangent vector of H^3 has chart
components equal to its last three Minkowski components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrameError, GeometryError, ProfileDomainError
from .geometry import MetricField, VectorField
from .immersion import Immersion
from .measure import MeasureSpec, NavigationData
from .models import SpaceForm
from .profiles import HYPERBOLIC, SPHERICAL, ProfileJet, Profile, type_delta

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
H3 = SpaceForm(3, -1, 1.0)


def minkowski(a, b) -> float:
    return float(np.asarray(a) @ ETA @ np.asarray(b))


@dataclass(frozen=True)
class LorentzPoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", c)
        if c.shape != (4,):
            raise GeometryError("a Lorentz point has four coordinates")
        if abs(minkowski(c, c) + 1) > 1e-10 * max(1.0, c[0] ** 2) or not c[0] > 0:
            raise GeometryError(f"{c} is not on the upper sheet of the hyperboloid")

    def minkowski_residual(self) -> float:
        return abs(minkowski(self.coords, self.coords) + 1)

    def poincare(self):
        return self.coords[1:] / (1 + self.coords[0])

    def chart(self):
        return self.coords[1:].copy()


@dataclass(frozen=True)
class MixedKillingField:
    """W~ = (eps1 p2, eps1 p1, -eps2 p4, eps2 p3)."""

    eps1: float
    eps2: float

    def __post_init__(self):
        if self.eps1 == 0 and self.eps2 == 0:
            raise ValueError("at least one of eps1, eps2 must be nonzero")

    @property
    def matrix(self):
        K = np.zeros((4, 4))
        K[0, 1] = K[1, 0] = self.eps1
        K[2, 3] = -self.eps2
        K[3, 2] = self.eps2
        return K

    def value(self, p):
        return self.matrix @ np.asarray(p, dtype=float)

    def norm_sq(self, p) -> float:
        p1, p2, p3, p4 = np.asarray(p, dtype=float)
        e1, e2 = self.eps1 ** 2, self.eps2 ** 2
        return -e1 * p2 ** 2 + e1 * p1 ** 2 + e2 * p4 ** 2 + e2 * p3 ** 2

    def eps_for(self, kind: str) -> float:
        """Killing strength governing w on surfaces of the given type."""
        return self.eps1 if type_delta(kind) == SPHERICAL else self.eps2

    def chart_field(self) -> VectorField:
        return H3.killing_field(self.matrix)


def in_omega(p, field: MixedKillingField) -> bool:
    coords = p.coords if isinstance(p, LorentzPoint) else np.asarray(p, dtype=float)
    return field.norm_sq(coords) < 1


def hyperboloid_chart(u, field: MixedKillingField):
    """(LorentzPoint, chart metric, chart wind) at chart point ``u``."""
    u = np.asarray(u, dtype=float)
    return LorentzPoint(H3.lift(u)), H3.metric(), field.chart_field()


def chart_navigation(field: MixedKillingField, measure: MeasureSpec | None = None) -> NavigationData:
    return NavigationData(H3.metric(), field.chart_field(), measure or MeasureSpec.bh(2))


def surface_point(kind: str, x1: float, phi: float, theta: float) -> LorentzPoint:
    delta = type_delta(kind)
    if delta == SPHERICAL:
        if x1 == 0:
            raise ProfileDomainError("spherical type requires x1 != 0")
        r = np.sqrt(1 + x1 ** 2)
        c = [r * np.cosh(phi), r * np.sinh(phi), x1 * np.cos(theta), x1 * np.sin(theta)]
    else:
        if not x1 > 1:
            raise ProfileDomainError("hyperbolic type requires x1 > 1")
        r = np.sqrt(x1 ** 2 - 1)
        c = [x1 * np.cosh(theta), x1 * np.sinh(theta), r * np.cos(phi), r * np.sin(phi)]
    return LorentzPoint(np.array(c))


def _curve(delta, pj: ProfileJet):
    """Generating curve (x, y, z) and its first two parameter derivatives."""
    x1, a1, a2, ph, p1, p2 = pj
    r = np.sqrt(delta + x1 ** 2)
    r1 = x1 * a1 / r
    r2 = (a1 ** 2 + x1 * a2) / r - x1 ** 2 * a1 ** 2 / r ** 3
    if delta == SPHERICAL:
        f, f1, f2 = np.cosh(ph), np.sinh(ph), np.cosh(ph)   # cosh and its derivatives
        gg, g1, g2 = np.sinh(ph), np.cosh(ph), np.sinh(ph)
    else:
        f, f1, f2 = np.cos(ph), -np.sin(ph), -np.cos(ph)
        gg, g1, g2 = np.sin(ph), np.cos(ph), -np.sin(ph)

    def prod(c, c1, c2):
        val = r * c
        d = r1 * c + r * c1 * p1
        dd = r2 * c + 2 * r1 * c1 * p1 + r * (c2 * p1 ** 2 + c1 * p2)
        return val, d, dd

    A = prod(f, f1, f2)
    B = prod(gg, g1, g2)
    Z = (x1, a1, a2)
    if delta == SPHERICAL:
        x, y, z = A, B, Z
    else:
        x, y, z = Z, A, B
    return tuple(np.array(v) for v in zip(x, y, z))


def surface_jet(kind: str, pj: ProfileJet, theta: float):
    """X and its partials (X_a, X_th, X_aa, X_ath, X_thth) in L^4."""
    delta = type_delta(kind)
    c0, c1, c2 = _curve(delta, pj)
    if delta == SPHERICAL:
        ct, st = np.cos(theta), np.sin(theta)
        X = np.array([c0[0], c0[1], c0[2] * ct, c0[2] * st])
        Xa = np.array([c1[0], c1[1], c1[2] * ct, c1[2] * st])
        Xaa = np.array([c2[0], c2[1], c2[2] * ct, c2[2] * st])
        Xt = np.array([0, 0, -c0[2] * st, c0[2] * ct])
        Xat = np.array([0, 0, -c1[2] * st, c1[2] * ct])
        Xtt = np.array([0, 0, -c0[2] * ct, -c0[2] * st])
    else:
        ch, sh = np.cosh(theta), np.sinh(theta)
        X = np.array([c0[0] * ch, c0[0] * sh, c0[1], c0[2]])
        Xa = np.array([c1[0] * ch, c1[0] * sh, c1[1], c1[2]])
        Xaa = np.array([c2[0] * ch, c2[0] * sh, c2[1], c2[2]])
        Xt = np.array([c0[0] * sh, c0[0] * ch, 0, 0])
        Xat = np.array([c1[0] * sh, c1[0] * ch, 0, 0])
        Xtt = np.array([c0[0] * ch, c0[0] * sh, 0, 0])
    return X, Xa, Xt, Xaa, Xat, Xtt


def rotational_normal(kind: str, pj: ProfileJet, theta: float):
    """Explicit unit normal in L^4 built from the unit tangent of the generating curve."""
    delta = type_delta(kind)
    x1 = pj.x1
    _, dt1, _ = pj.arc_length_derivatives(delta)
    if not delta + x1 ** 2 - dt1 ** 2 > 1e-12:
        raise DegenerateFrameError("delta + x1^2 - x1'^2 = 0: the explicit normal degenerates")
    (x, y, z), (xp, yp, zp), _ = _curve(delta, pj)
    speed = np.sqrt(pj.speed_sq(delta))
    xp, yp, zp = xp / speed, yp / speed, zp / speed
    if delta == SPHERICAL:
        a = x * yp - xp * y
        return np.array([z * yp - y * zp, xp * z - x * zp, a * np.cos(theta), a * np.sin(theta)])
    a = y * zp - z * yp
    return np.array([a * np.cosh(theta), a * np.sinh(theta), x * zp - xp * z, xp * y - x * yp])


class RotationalSurface:
    """Rotational surface of spherical or hyperbolic type, exposed as a chart immersion."""

    def __init__(self, profile: Profile, field: MixedKillingField, x1_scale: float = 1.0):
        self.profile = profile
        self.field = field
        self.kind = profile.kind
        self.delta = profile.delta
        self.x1_scale = x1_scale

    def profile_jet(self, a, phi=None) -> ProfileJet:
        if phi is None:
            pj = self.profile.jet(a)
        else:
            pj = self.profile.jet_with_phi(a, phi)
        if self.x1_scale != 1.0:
            k = self.x1_scale
            pj = pj._replace(x1=k * pj.x1, d1=k * pj.d1, d2=k * pj.d2)
        return pj

    def lorentz_jet(self, a, theta, phi=None):
        return surface_jet(self.kind, self.profile_jet(a, phi), theta)

    def point(self, a, theta, phi=None) -> LorentzPoint:
        return LorentzPoint(self.lorentz_jet(a, theta, phi)[0])

    def immersion(self, explicit_normal: bool = False, phi_lookup=None) -> Immersion:
        """Chart immersion (a, theta) -> u with analytic first and second partials."""

        def parts(x):
            phi = phi_lookup(x[0]) if phi_lookup is not None else None
            return self.lorentz_jet(x[0], x[1], phi)

        def f(x):
            return parts(x)[0][1:]

        def jac(x):
            _, Xa, Xt, _, _, _ = parts(x)
            return np.column_stack([Xa[1:], Xt[1:]])

        def hess(x):
            _, _, _, Xaa, Xat, Xtt = parts(x)
            H = np.empty((3, 2, 2))
            H[:, 0, 0] = Xaa[1:]
            H[:, 0, 1] = H[:, 1, 0] = Xat[1:]
            H[:, 1, 1] = Xtt[1:]
            return H

        normal = None
        if explicit_normal:
            def normal(x):
                phi = phi_lookup(x[0]) if phi_lookup is not None else None
                return rotational_normal(self.kind, self.profile_jet(x[0], phi), x[1])[1:]
        return Immersion(f, 2, jac, hess, normal=normal)


def omega_x1_sq_bound(kind: str, field: MixedKillingField) -> float:
    """Upper bound on x1^2 for a rotational surface point to lie in Omega.

    On both surface types |W~|^2 depends on x1 only:
    spherical ``eps1^2 (1 + x1^2) + eps2^2 x1^2``, hyperbolic ``eps1^2 x1^2 + eps2^2 (x1^2 - 1)``.
    """
    e1, e2 = field.eps1 ** 2, field.eps2 ** 2
    if type_delta(kind) == SPHERICAL:
        return (1 - e1) / (e1 + e2) if e1 + e2 > 0 else np.inf
    return (1 + e2) / (e1 + e2)
