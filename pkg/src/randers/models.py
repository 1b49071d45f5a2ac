"""Test spaces with analytic derivatives: polynomial metrics, space-form charts with
their Killing fields, and polynomial immersions.

Space forms are realised as graphs over the last ``m`` coordinates of a quadric in
R^{m+1}: the hyperboloid ``-P0^2 + |u|^2 = -R^2`` (sign = -1) or the sphere
``P0^2 + |u|^2 = R^2`` (sign = +1).  Killing fields are restrictions of linear maps
``P -> K P`` with ``K = eta A``, ``A`` antisymmetric.
"""

from __future__ import annotations

import numpy as np

from .geometry import MetricField, VectorField
from .immersion import Immersion


def euclidean_metric(m: int) -> MetricField:
    eye = np.eye(m)
    return MetricField(m, lambda x: eye, lambda x: np.zeros((m, m, m)), lambda x: np.zeros((m, m, m, m)))


def polar_metric() -> MetricField:
    """diag(1, r^2) on (r, theta)."""
    return MetricField(
        2,
        lambda x: np.diag([1.0, x[0] ** 2]),
        lambda x: np.array([[[0, 0], [0, 2 * x[0]]], [[0, 0], [0, 0]]], dtype=float),
    )


def polynomial_metric(rng, m: int, size: float = 0.15) -> MetricField:
    """h(x) = I + S0 + S1_c x^c + S2_cd x^c x^d with small random symmetric coefficients."""

    def sym(shape):
        a = rng.normal(size=shape)
        return 0.5 * (a + np.swapaxes(a, -1, -2))

    S0 = size * sym((m, m))
    S1 = size * sym((m, m, m))                 # [c, a, b]
    S2 = sym((m, m, m, m)) * size * 0.5        # [c, d, a, b]
    S2 = 0.5 * (S2 + S2.transpose(1, 0, 2, 3))

    def value(x):
        return np.eye(m) + S0 + np.einsum("cab,c->ab", S1, x) + np.einsum("cdab,c,d->ab", S2, x, x)

    def first(x):
        return S1 + 2 * np.einsum("cdab,d->cab", S2, x)

    def second(x):
        return 2 * S2

    return MetricField(m, value, first, second)


def polynomial_field(rng, m: int, size: float = 1.0) -> VectorField:
    a = rng.normal(size=m) * size
    B = rng.normal(size=(m, m)) * size
    C = rng.normal(size=(m, m, m)) * size * 0.5
    C = 0.5 * (C + C.transpose(0, 2, 1))
    return VectorField(
        m,
        lambda x: a + B @ x + 0.5 * np.einsum("abc,b,c->a", C, x, x),
        lambda x: B + np.einsum("abc,c->ab", C, x),
    )


def scaled_field(field: VectorField, factor: float) -> VectorField:
    return VectorField(field.dim, lambda x: factor * field.value(x), lambda x: factor * field.jacobian(x))


class SpaceForm:
    """Chart of a space form of curvature ``sign / radius^2`` over the coordinates ``u``."""

    def __init__(self, m: int, sign: int, radius: float = 1.0):
        self.m = m
        self.sign = sign
        self.radius = radius
        self.eta = np.diag([-1.0 if sign < 0 else 1.0] + [1.0] * m)

    def _rho(self, u):
        return self.radius ** 2 - self.sign * (u @ u)

    def lift(self, u):
        u = np.asarray(u, dtype=float)
        return np.concatenate([[np.sqrt(self._rho(u))], u])

    def lift_jacobian(self, u):
        u = np.asarray(u, dtype=float)
        p0 = np.sqrt(self._rho(u))
        return np.vstack([-self.sign * u / p0, np.eye(self.m)])

    def metric(self) -> MetricField:
        m, sg = self.m, self.sign
        eye = np.eye(m)

        def value(u):
            return eye + sg * np.outer(u, u) / self._rho(u)

        def first(u):
            r = self._rho(u)
            t = np.einsum("ac,b->cab", eye, u) + np.einsum("a,bc->cab", u, eye)
            return sg * t / r + 2 * np.einsum("a,b,c->cab", u, u, u) / r ** 2

        def second(u):
            r = self._rho(u)
            t0 = np.einsum("ac,bd->cdab", eye, eye) + np.einsum("ad,bc->cdab", eye, eye)
            t1 = (
                np.einsum("ac,b,d->cdab", eye, u, u)
                + np.einsum("bc,a,d->cdab", eye, u, u)
                + np.einsum("ad,b,c->cdab", eye, u, u)
                + np.einsum("bd,a,c->cdab", eye, u, u)
                + np.einsum("cd,a,b->cdab", eye, u, u)
            )
            t2 = np.einsum("a,b,c,d->cdab", u, u, u, u)
            return sg * t0 / r + 2 * t1 / r ** 2 + 8 * sg * t2 / r ** 3

        return MetricField(m, value, first, second)

    def killing_field(self, K) -> VectorField:
        """Chart expression of the ambient linear field P -> K P."""
        K = np.asarray(K, dtype=float)
        return VectorField(
            self.m,
            lambda u: (K @ self.lift(u))[1:],
            lambda u: K[1:, :] @ self.lift_jacobian(u),
        )

    def random_generator(self, rng):
        A = rng.normal(size=(self.m + 1, self.m + 1))
        return self.eta @ (A - A.T)


def euclidean_killing(rng, m: int) -> VectorField:
    a = rng.normal(size=m)
    A = rng.normal(size=(m, m))
    A = A - A.T
    return VectorField(m, lambda x: a + A @ x, lambda x: A)


def polynomial_immersion(rng, m: int, n: int, base=None, scale: float = 1.0):
    """f(x) = f0 + Z x + Q(x,x)/2 + T(x,x,x)/6 with analytic derivatives up to order 2."""
    f0 = np.zeros(m) if base is None else np.asarray(base, dtype=float)
    while True:
        Z = rng.normal(size=(m, n))
        if np.linalg.cond(Z) < 8:
            break
    Q = rng.normal(size=(m, n, n)) * scale
    Q = 0.5 * (Q + Q.transpose(0, 2, 1))
    T = rng.normal(size=(m, n, n, n)) * scale * 0.5
    # fully symmetric in the last three indices
    T = (T + T.transpose(0, 1, 3, 2) + T.transpose(0, 2, 1, 3) + T.transpose(0, 2, 3, 1)
         + T.transpose(0, 3, 1, 2) + T.transpose(0, 3, 2, 1)) / 6

    def f(x):
        return f0 + Z @ x + 0.5 * np.einsum("aij,i,j->a", Q, x, x) + np.einsum("aijk,i,j,k->a", T, x, x, x) / 6

    def jac(x):
        return Z + np.einsum("aij,j->ai", Q, x) + 0.5 * np.einsum("aijk,j,k->ai", T, x, x)

    def hess(x):
        return Q + np.einsum("aijk,k->aij", T, x)

    return Immersion(f, n, jac, hess)
