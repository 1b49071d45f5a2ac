"""Generating profiles of rotational surfaces in H^3.

A profile is the function x1 of a curve parameter together with the angle
phi.  ``delta = +1`` is the spherical type and ``delta = -1`` the hyperbolic
type; ``eps`` is the Killing strength that governs ``w = -eps * x1'``.

Throughout, ``Delta = delta + x1^2 - x1'^2`` with x1' the arc-length derivative,
and the BH volume ratio function for surfaces is ``Phi(S) = (3S - 2)/S^2`` with
``S = 1 - eps^2 x1'^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import (
    DegenerateFirstIntegralError,
    InvalidFrakSError,
    ProfileDomainError,
    QuadratureError,
    SolvabilityError,
)

SPHERICAL = 1
HYPERBOLIC = -1
DEFAULT_MARGIN = 1e-2


def type_delta(kind: str) -> int:
    if kind == "spherical":
        return SPHERICAL
    if kind == "hyperbolic":
        return HYPERBOLIC
    raise ValueError(f"unknown surface type {kind!r}")


def bh_phi(S):
    """Phi and Phi' of the BH measure for n = 2."""
    if not S > 0:
        raise InvalidFrakSError(f"invalid s = {S!r}")
    return (3 * S - 2) / S ** 2, -3 / S ** 2 + 4 / S ** 3


class ProfileJet(NamedTuple):
    """x1, phi and their first two derivatives in the profile parameter."""

    x1: float
    d1: float
    d2: float
    phi: float
    dphi: float
    ddphi: float

    def speed_sq(self, delta):
        """Squared hyperbolic speed of the generating curve."""
        r2 = delta + self.x1 ** 2
        return self.d1 ** 2 / r2 + r2 * self.dphi ** 2

    def arc_length_derivatives(self, delta):
        """(x1, dx1/dt, d2x1/dt2) with t the arc length (increasing with the parameter)."""
        x1, a1, a2, _, p1, p2 = self
        r2 = delta + x1 ** 2
        sp2 = a1 ** 2 / r2 + r2 * p1 ** 2
        sp = np.sqrt(sp2)
        dsp2 = 2 * a1 * a2 / r2 - 2 * x1 * a1 ** 3 / r2 ** 2 + 2 * x1 * a1 * p1 ** 2 + 2 * r2 * p1 * p2
        dsp = dsp2 / (2 * sp)
        t1 = a1 / sp
        t2 = (a2 - t1 * dsp) / sp2
        return x1, t1, t2


def frame_term(x1, dx1, delta):
    """Delta = delta + x1^2 - x1'^2."""
    return delta + x1 ** 2 - dx1 ** 2


def check_type(x1, delta):
    if delta == SPHERICAL and x1 == 0:
        raise ProfileDomainError("spherical type requires x1 != 0")
    if delta == HYPERBOLIC and not x1 > 1:
        raise ProfileDomainError(f"hyperbolic type requires x1 > 1, got {x1!r}")


def minimal_residual(x1, dx1, ddx1, delta, eps) -> float:
    """Left-hand side of the BH-minimal surface equation in arc length."""
    D = frame_term(x1, dx1, delta)
    if D == 0:
        raise ProfileDomainError("Delta = 0: the frame degenerates")
    val, dval = bh_phi(1 - eps ** 2 * dx1 ** 2)
    return (x1 * ddx1 + dx1 ** 2 - 2 * x1 ** 2 - delta) / D * val + 2 * eps ** 2 * x1 * ddx1 * dval


def energy(x1, dx1, delta, eps) -> float:
    """First integral x1 sqrt(Delta) Phi(1 - eps^2 x1'^2)."""
    val, _ = bh_phi(1 - eps ** 2 * dx1 ** 2)
    if abs(val) < 1e-14:
        raise DegenerateFirstIntegralError("Phi(s) = 0: first integral degenerates (s = 2/3 family)")
    D = frame_term(x1, dx1, delta)
    if D < 0:
        raise ProfileDomainError("Delta < 0")
    return x1 * np.sqrt(D) * val


def rotational_H(x1, dx1, ddx1, delta) -> float:
    """Riemannian mean curvature for the explicit normal, H = -(lambda1 + lambda2)/2."""
    D = frame_term(x1, dx1, delta)
    if not D > 0 or x1 == 0:
        raise ProfileDomainError("rotational_H needs Delta > 0 and x1 != 0")
    return (x1 * ddx1 + dx1 ** 2 - 2 * x1 ** 2 - delta) / (2 * x1 * np.sqrt(D))


def principal_lambdas(x1, dx1, ddx1, delta):
    D = frame_term(x1, dx1, delta)
    if not D > 0 or x1 == 0:
        raise ProfileDomainError("principal curvatures need Delta > 0 and x1 != 0")
    return (x1 - ddx1) / np.sqrt(D), np.sqrt(D) / x1


def pairing_closed_form(x1, dx1, ddx1, delta, eps) -> float:
    """<df(grad w), W~> = -eps^2 x1'' sqrt(Delta) on rotational surfaces."""
    return -eps ** 2 * ddx1 * np.sqrt(frame_term(x1, dx1, delta))


def _phi_derivs_t(x1, d1, d2, delta):
    r2 = delta + x1 ** 2
    D = r2 - d1 ** 2
    if D <= 0:
        return 0.0, 0.0
    sq = np.sqrt(D)
    dphi = sq / r2
    dD = 2 * x1 * d1 - 2 * d1 * d2
    ddphi = dD / (2 * sq * r2) - sq * 2 * x1 * d1 / r2 ** 2
    return dphi, ddphi


class Profile:
    """Base class; subclasses provide ``jet(a)`` in their own parameter."""

    param = "t"

    def __init__(self, delta: int, eps: float):
        if delta not in (SPHERICAL, HYPERBOLIC):
            raise ValueError("delta must be +1 or -1")
        self.delta = delta
        self.eps = float(eps)

    @property
    def kind(self) -> str:
        return "spherical" if self.delta == SPHERICAL else "hyperbolic"

    def jet(self, a) -> ProfileJet:
        raise NotImplementedError

    def jet_with_phi(self, a, phi_val) -> ProfileJet:
        """Jet at ``a`` with a precomputed phi value (skips any quadrature)."""
        return self.jet(a)._replace(phi=phi_val)

    def phi_values(self, a_values):
        return np.array([self.jet(a).phi for a in np.atleast_1d(a_values)])

    def degenerate(self) -> bool:
        return False


class ArcLengthProfile(Profile):
    """Profile given analytically in arc length: ``func(t) -> (x1, x1', x1'')``.

    phi(t) is the integral of sqrt(Delta)/(delta + x1^2) from 0 to t.
    """

    def __init__(self, delta, eps, func: Callable, phi0: float = 0.0):
        super().__init__(delta, eps)
        self.func = func
        self.phi0 = phi0

    def phi(self, t):
        return self.phi0 + self._increment(0.0, t)

    def jet_with_phi(self, t, phi_val):
        x1, d1, d2 = self.func(t)
        dphi, ddphi = _phi_derivs_t(x1, d1, d2, self.delta)
        return ProfileJet(x1, d1, d2, phi_val, dphi, ddphi)

    def jet(self, t):
        return self.jet_with_phi(t, self.phi(t))

    def phi_values(self, t_values):
        """phi on a sorted grid, accumulated interval by interval."""
        t_values = np.atleast_1d(np.asarray(t_values, dtype=float))
        out = np.empty_like(t_values)
        acc, prev = self.phi(t_values[0]), t_values[0]
        for k, t in enumerate(t_values):
            if k:
                acc += self._increment(prev, t)
            out[k] = acc
            prev = t
        return out

    def _increment(self, a, b):
        def rate(tau):
            x1, d1, d2 = self.func(tau)
            return _phi_derivs_t(x1, d1, d2, self.delta)[0]

        return quad(rate, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]


def linear_profile(delta, eps, c, sign=1) -> ArcLengthProfile:
    """x1 = sign * t / (sqrt(3) eps) + c, the Phi = 0 family."""
    a = sign / (np.sqrt(3) * eps)
    return ArcLengthProfile(delta, eps, lambda t: (a * t + c, a, 0.0))


class SpecialProfile(Profile):
    """Delta = 0 solutions: x1 = sinh t (spherical) or cosh t (hyperbolic), phi = 0."""

    def jet(self, t):
        if self.delta == SPHERICAL:
            return ProfileJet(np.sinh(t), np.cosh(t), np.sinh(t), 0.0, 0.0, 0.0)
        return ProfileJet(np.cosh(t), np.sinh(t), np.cosh(t), 0.0, 0.0, 0.0)

    def phi_values(self, t_values):
        return np.zeros(np.shape(np.atleast_1d(t_values)))

    def degenerate(self) -> bool:
        return True


# --- closed-form solutions in the parameter s = x1'^2 -------------------------

def _g_derivs(s, eps):
    """g = (1 - eps^2 s)^2 / (1 - 3 eps^2 s), i.e. 1/Phi, and its first two s-derivatives."""
    e2 = eps ** 2
    a = 1 - e2 * s
    b = 1 - 3 * e2 * s
    c = 1 + 3 * e2 * s
    g = a ** 2 / b
    g1 = e2 * a * c / b ** 2
    g2 = e2 ** 2 * (-c * b + 3 * a * b + 6 * a * c) / b ** 3
    return g, g1, g2


def closed_form_X(s, E, eps, delta):
    """X = x1^2 and its first two s-derivatives from the first integral."""
    if abs(1 - 3 * eps ** 2 * s) < 1e-15:
        raise ProfileDomainError("s = 1/(3 eps^2) is excluded")
    g, g1, g2 = _g_derivs(s, eps)
    R = (delta - s) ** 2 + 4 * E ** 2 * g ** 2
    R1 = -2 * (delta - s) + 8 * E ** 2 * g * g1
    R2 = 2 + 8 * E ** 2 * (g1 ** 2 + g * g2)
    sq = np.sqrt(R)
    X = 0.5 * (-(delta - s) + sq)
    X1 = 0.5 * (1 + R1 / (2 * sq))
    X2 = 0.5 * (R2 / (2 * sq) - R1 ** 2 / (4 * sq ** 3))
    return X, X1, X2


def closed_form_x1(s, E, eps, delta, branch=1) -> float:
    """x1(s) solving the first integral with energy E on branch sign ``branch``."""
    X, _, _ = closed_form_X(s, E, eps, delta)
    if X < 0:
        raise ProfileDomainError(f"negative x1^2 = {X!r}")
    x1 = branch * np.sqrt(X)
    check_type(x1, delta)
    return x1


def check_s_range(s_lo, s_hi, eps, margin=DEFAULT_MARGIN):
    """Validate that [s_lo, s_hi] lies inside one admissible subinterval with the margin."""
    crit = 1 / (3 * eps ** 2)
    top = 1 / eps ** 2
    if not s_lo < s_hi:
        raise ValueError("s-range must satisfy s_min < s_max")
    if s_lo < margin:
        raise ValueError(f"s_min must be >= margin {margin} away from 0")
    if s_hi > top - margin:
        raise ValueError(f"s_max must stay {margin} below 1/eps^2 = {top:.6g}")
    if s_lo < crit + margin and s_hi > crit - margin:
        raise ValueError(f"s-range must stay {margin} away from 1/(3 eps^2) = {crit:.6g}")


def _phi_rate_s(s, E, eps, delta):
    """d phi / d s on the positive sign: (E/2 delta) (1-eps^2 s)^2/(sqrt(s)(1-3 eps^2 s)) dlog(X/(delta+X))/ds."""
    X, X1, _ = closed_form_X(s, E, eps, delta)
    dlog = X1 * (1 / X - 1 / (delta + X))
    e2 = eps ** 2
    return E / (2 * delta) * (1 - e2 * s) ** 2 / (np.sqrt(s) * (1 - 3 * e2 * s)) * dlog


def _phi_rate_u(u, E, eps, delta):
    # s = u^2, ds = 2u du cancels the 1/sqrt(s) endpoint singularity
    s = u * u
    X, X1, _ = closed_form_X(s, E, eps, delta)
    dlog = X1 * (1 / X - 1 / (delta + X))
    e2 = eps ** 2
    return E / delta * (1 - e2 * s) ** 2 / (1 - 3 * e2 * s) * dlog


def phi_of_s(s_values, E, eps, delta, sign=1, s_ref=None, tol=1e-10):
    """phi at each s by adaptive quadrature from ``s_ref`` (default: the first sample)."""
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    s_ref = float(s_values[0] if s_ref is None else s_ref)
    if E == 0:
        return np.zeros_like(s_values)
    out = np.empty_like(s_values)
    worst = (0.0, None)
    for k, s in enumerate(s_values):
        val, err = quad(_phi_rate_u, np.sqrt(s_ref), np.sqrt(s), args=(E, eps, delta),
                        epsabs=tol, epsrel=1e-12, limit=200)
        if err > worst[0]:
            worst = (err, (s_ref, s))
        out[k] = sign * val
    if worst[0] > 1e3 * tol:
        raise QuadratureError(f"phi quadrature did not converge; worst subinterval {worst[1]} (error {worst[0]:.2e})")
    return out


class ClosedFormProfile(Profile):
    """Profile parametrized by s = x1'^2 with energy E, x1 branch and phi sign."""

    param = "s"

    def __init__(self, delta, eps, E, branch=1, sign=1, s_ref=None):
        super().__init__(delta, eps)
        if E == 0:
            raise ValueError("closed-form profiles require E != 0")
        self.E = float(E)
        self.branch = branch
        self.sign = sign
        self.s_ref = s_ref

    def x1(self, s):
        return closed_form_x1(s, self.E, self.eps, self.delta, self.branch)

    def phi_values(self, s_values):
        s_ref = self.s_ref if self.s_ref is not None else float(np.min(s_values))
        return phi_of_s(s_values, self.E, self.eps, self.delta, self.sign, s_ref)

    def jet_with_phi(self, s, phi_val):
        E, eps, delta, br = self.E, self.eps, self.delta, self.branch
        X, X1, X2 = closed_form_X(s, E, eps, delta)
        check_type(br * np.sqrt(X), delta)
        r = np.sqrt(X)
        x1 = br * r
        d1 = br * X1 / (2 * r)
        d2 = br * (X2 / (2 * r) - X1 ** 2 / (4 * r ** 3))

        e2 = eps ** 2
        a = 1 - e2 * s
        b = 1 - 3 * e2 * s
        v = a ** 2 / (b * np.sqrt(s) * X * (delta + X))
        dlogv = -2 * e2 / a + 3 * e2 / b - 0.5 / s - X1 / X - X1 / (delta + X)
        k = self.sign * E / 2
        dphi = k * v * X1
        ddphi = k * (v * dlogv * X1 + v * X2)
        return ProfileJet(x1, d1, d2, phi_val, dphi, ddphi)

    def jet(self, s):
        if self.s_ref is None:
            raise ValueError("ClosedFormProfile.jet needs s_ref to anchor phi")
        return self.jet_with_phi(s, float(phi_of_s([s], self.E, self.eps, self.delta, self.sign, self.s_ref)[0]))


# --- ODE integration --------------------------------------------------------

def minimal_rhs(x1, dx1, delta, eps):
    """x1'' solved from the BH-minimal equation, plus the solvability denominator."""
    D = frame_term(x1, dx1, delta)
    val, dval = bh_phi(1 - eps ** 2 * dx1 ** 2)
    denom = x1 * val / D + 2 * eps ** 2 * x1 * dval
    return (2 * x1 ** 2 + delta - dx1 ** 2) * val / D / denom, denom


@dataclass
class OdeProfile(Profile):
    """Arc-length profile integrated from the BH-minimal equation.

    ``sol`` is the dense output of the state (x1, x1', phi); ``status`` is
    ``"completed"`` or the name of the event that stopped integration.
    """

    delta: int
    eps: float
    sol: object
    t: np.ndarray
    y: np.ndarray
    status: str
    t_final: float

    param = "t"

    def state(self, t):
        return self.sol(t)

    def jet_with_phi(self, t, phi_val):
        x1, d1, _ = self.sol(t)
        d2, _ = minimal_rhs(x1, d1, self.delta, self.eps)
        dphi, ddphi = _phi_derivs_t(x1, d1, d2, self.delta)
        return ProfileJet(x1, d1, d2, phi_val, dphi, ddphi)

    def jet(self, t):
        return self.jet_with_phi(t, float(self.sol(t)[2]))

    def phi_values(self, t_values):
        return np.asarray(self.sol(np.atleast_1d(t_values))[2], dtype=float)


def ode_integrate(delta, eps, x1_0, dx1_0, t_span, rtol=1e-11, atol=1e-12, phi0=0.0,
                  event_tol=1e-9) -> OdeProfile:
    """Integrate the BH-minimal profile equation with adaptive Runge-Kutta (DOP853).

    Integration stops early when S = 1 - eps^2 x1'^2 -> 0, Delta -> 0, the x1''
    denominator vanishes, or x1 leaves its type domain.
    """
    check_type(x1_0, delta)
    if not frame_term(x1_0, dx1_0, delta) > 0:
        raise SolvabilityError("initial data must satisfy Delta > 0")
    if not 1 - eps ** 2 * dx1_0 ** 2 > 0:
        raise SolvabilityError("initial data must satisfy 1 - eps^2 x1'^2 > 0")
    _, denom0 = minimal_rhs(x1_0, dx1_0, delta, eps)
    if abs(denom0) < 1e-12:
        raise SolvabilityError(f"x1'' is not solvable from the initial data (denominator {denom0:.2e})")

    def rhs(t, y):
        # trial stages may step past S = 0; NaN makes the solver reject and shrink the step
        x1, d1, _ = y
        try:
            d2, _ = minimal_rhs(x1, d1, delta, eps)
        except (InvalidFrakSError, ZeroDivisionError):
            return [np.nan, np.nan, np.nan]
        return [d1, d2, _phi_derivs_t(x1, d1, d2, delta)[0]]

    def ev_s(t, y):
        return 1 - eps ** 2 * y[1] ** 2 - event_tol

    def ev_frame(t, y):
        return frame_term(y[0], y[1], delta) - event_tol

    def ev_denom(t, y):
        try:
            return minimal_rhs(y[0], y[1], delta, eps)[1]
        except (InvalidFrakSError, ZeroDivisionError):
            return np.nan

    def ev_type(t, y):
        return abs(y[0]) - event_tol if delta == SPHERICAL else y[0] - 1 - event_tol

    events = [ev_s, ev_frame, ev_denom, ev_type]
    names = ["s -> 0", "Delta -> 0", "denominator -> 0", "type domain"]
    for ev in events:
        ev.terminal = True

    res = solve_ivp(rhs, t_span, [x1_0, dx1_0, phi0], method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True, events=events)
    status = "completed"
    for name, te in zip(names, res.t_events):
        if len(te):
            status = name
    return OdeProfile(delta=delta, eps=eps, sol=res.sol, t=res.t, y=res.y, status=status, t_final=float(res.t[-1]))
