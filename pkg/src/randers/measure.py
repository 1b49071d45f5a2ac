"""Busemann-Hausdorff / Holmes-Thompson volume densities of induced Randers metrics.

A measure is described by a pair of scalar functions: ``rho`` of the
quantity ``s = 1 - |W~|^2 + |W|^2_h`` and ``chi`` of ``q = |W~|^2``.  The
volume density of an n-dimensional immersion is ``rho(s) / chi(q) * sqrt(det h)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateJetError, InvalidFrakSError, OutsideRandersDomainError, ZeroVectorError
from .geometry import MetricField, VectorField


@dataclass(frozen=True)
class MeasureSpec:
    kind: str
    n: int
    rho: Callable[[float], float]
    drho: Callable[[float], float]
    ddrho: Callable[[float], float]
    chi: Callable[[float], float]
    dlogchi: Callable[[float], float]

    @classmethod
    def bh(cls, n: int) -> "MeasureSpec":
        a = n / 2.0
        return cls(
            "BH", n,
            rho=lambda s: s ** (-a),
            drho=lambda s: -a * s ** (-a - 1),
            ddrho=lambda s: a * (a + 1) * s ** (-a - 2),
            chi=lambda q: 1.0,
            dlogchi=lambda q: 0.0,
        )

    @classmethod
    def ht(cls, n: int) -> "MeasureSpec":
        b = (n + 1) / 2.0
        return cls(
            "HT", n,
            rho=lambda s: s ** 0.5,
            drho=lambda s: 0.5 * s ** -0.5,
            ddrho=lambda s: -0.25 * s ** -1.5,
            chi=lambda q: (1.0 - q) ** b,
            dlogchi=lambda q: -b / (1.0 - q),
        )

    @classmethod
    def custom(cls, n, rho, drho, ddrho, chi, dlogchi) -> "MeasureSpec":
        return cls("custom", n, rho, drho, ddrho, chi, dlogchi)

    @classmethod
    def from_name(cls, name: str, n: int) -> "MeasureSpec":
        name = name.upper()
        if name == "BH":
            return cls.bh(n)
        if name == "HT":
            return cls.ht(n)
        raise ValueError(f"unknown measure {name!r}")


@dataclass(frozen=True)
class NavigationData:
    """Navigation data (h~, W~) of a Randers space together with a volume measure."""

    metric: MetricField
    wind: VectorField
    measure: MeasureSpec
    enforce_domain: bool = True

    def wind_norm_sq(self, x) -> float:
        W = self.wind.value(x)
        q = float(W @ self.metric.value(x) @ W)
        if q >= 1.0 and self.enforce_domain:
            raise OutsideRandersDomainError(f"|W|^2 = {q:.6g} >= 1 at {list(np.asarray(x))}")
        return q

    def with_measure(self, measure: MeasureSpec) -> "NavigationData":
        return NavigationData(self.metric, self.wind, measure, self.enforce_domain)

    def unrestricted(self) -> "NavigationData":
        """Same data without the |W~| < 1 check, for reporting outside the Randers domain."""
        return NavigationData(self.metric, self.wind, self.measure, False)


def frak_s(geom) -> float:
    """s = 1 - |W~|^2 + B^{ab} W~_a W~_b from a populated InducedGeometry."""
    return 1.0 - geom.wind_norm_sq + float(geom.W_low @ geom.B_up @ geom.W_low)


def phi(measure: MeasureSpec, s: float):
    """Volume ratio function and its derivative, (Phi(s), Phi'(s))."""
    if not s > 0:
        raise InvalidFrakSError(f"invalid s = {s!r}; must be positive")
    n = measure.n
    if measure.kind == "BH":
        a = n / 2.0
        val = s ** (-a) * (-n / s + n + 1)
        dval = n * (a + 1) * s ** (-a - 2) - (n + 1) * a * s ** (-a - 1)
        return val, dval
    if measure.kind == "HT":
        return s ** -0.5, -0.5 * s ** -1.5
    val = 2 * measure.drho(s) * (1 - s) + measure.rho(s)
    dval = 2 * measure.ddrho(s) * (1 - s) - measure.drho(s)
    return val, dval


def induced_metric(metric: MetricField, x, z):
    z = np.asarray(z, dtype=float)
    return z.T @ metric.value(x) @ z


def density(nav: NavigationData, x, z) -> float:
    """Volume density F(x~, z) = rho(s)/chi(|W~|^2) * sqrt(det h).

    ``z`` is the (n+p) x n matrix of first partials of the immersion.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    g = nav.metric.value(x)
    h = z.T @ g @ z
    try:
        L = np.linalg.cholesky(h)
    except np.linalg.LinAlgError:
        raise DegenerateJetError("degenerate immersion jet: induced metric not positive definite") from None
    W = nav.wind.value(x)
    W_low = g @ W
    q = float(W @ W_low)
    if q >= 1.0 and nav.enforce_domain:
        raise OutsideRandersDomainError(f"|W|^2 = {q:.6g} >= 1")
    Wi = z.T @ W_low
    y = np.linalg.solve(L, Wi)
    s = 1.0 - q + float(y @ y)
    if not s > 0:
        raise InvalidFrakSError(f"invalid s = {s!r}")
    sqrt_det = float(np.prod(np.diag(L)))
    return nav.measure.rho(s) / nav.measure.chi(q) * sqrt_det


def randers_norm(nav: NavigationData, x, y) -> float:
    """Randers norm F(x, y) solving |y/F - W~|_h = 1 (Zermelo navigation)."""
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise ZeroVectorError("randers_norm of the zero vector")
    g = nav.metric.value(x)
    W = nav.wind.value(x)
    lam = 1.0 - float(W @ g @ W)
    if lam <= 0:
        raise OutsideRandersDomainError("|W| >= 1")
    wy = float(W @ g @ y)
    yy = float(y @ g @ y)
    return (np.sqrt(lam * yy + wy * wy) - wy) / lam
