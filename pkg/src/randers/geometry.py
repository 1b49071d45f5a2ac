"""Chart-based Riemannian metrics and vector fields.

Index conventions follow the usual tensor layout:

* ``metric.first_deriv(x)[c, a, b]``  is  d_c h_ab
* ``metric.second_deriv(x)[c, d, a, b]`` is d_c d_d h_ab
* ``christoffel(...)[a, b, c]`` is Gamma^a_bc
* ``field.jacobian(x)[a, b]`` is d_b W^a
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import DegenerateMetricError, DegeneratePlaneError


@dataclass(frozen=True)
class DiffKernel:
    """Central-difference settings shared by every numerically differentiated quantity.

    The step applied to coordinate ``i`` is ``step * max(1, |x_i|)``.  With
    ``richardson`` on, one level of extrapolation combines steps ``h`` and
    ``h/2`` so the truncation error drops from O(h^2) to O(h^4).
    """

    step: float = 1e-5
    richardson: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("DiffKernel step must be positive")

    def steps(self, x):
        x = np.asarray(x, dtype=float)
        return self.step * np.maximum(1.0, np.abs(x))

    def gradient(self, func, x):
        """d func / d x_i stacked along a new leading axis."""
        x = np.asarray(x, dtype=float)
        hs = self.steps(x)

        def once(scale):
            out = []
            for i in range(x.size):
                h = hs[i] * scale
                xp = x.copy()
                xm = x.copy()
                xp[i] += h
                xm[i] -= h
                out.append((np.asarray(func(xp)) - np.asarray(func(xm))) / (2 * h))
            return np.array(out)

        d1 = once(1.0)
        if not self.richardson:
            return d1
        d2 = once(0.5)
        return (4 * d2 - d1) / 3

    def hessian(self, func, x):
        """d^2 func / d x_i d x_j stacked along two leading axes."""
        x = np.asarray(x, dtype=float)
        hs = self.steps(x)
        f0 = np.asarray(func(x))

        def once(scale):
            n = x.size
            out = np.empty((n, n) + f0.shape)
            for i in range(n):
                hi = hs[i] * scale
                e_i = np.zeros(n)
                e_i[i] = hi
                out[i, i] = (np.asarray(func(x + e_i)) - 2 * f0 + np.asarray(func(x - e_i))) / hi**2
                for j in range(i + 1, n):
                    hj = hs[j] * scale
                    e_j = np.zeros(n)
                    e_j[j] = hj
                    val = (
                        np.asarray(func(x + e_i + e_j))
                        - np.asarray(func(x + e_i - e_j))
                        - np.asarray(func(x - e_i + e_j))
                        + np.asarray(func(x - e_i - e_j))
                    ) / (4 * hi * hj)
                    out[i, j] = val
                    out[j, i] = val
            return out

        d1 = once(1.0)
        if not self.richardson:
            return d1
        d2 = once(0.5)
        return (4 * d2 - d1) / 3


DEFAULT_KERNEL = DiffKernel()
# second derivatives: larger step, one Richardson level
CURVATURE_KERNEL = DiffKernel(step=1e-3, richardson=True)


class MetricField:
    """Riemannian metric h_ab(x) on a coordinate chart.

    Only ``value`` is required.  Missing derivatives fall back to central
    differences; analytic callables override them when supplied.
    """

    def __init__(
        self,
        dim: int,
        value: Callable,
        first_deriv: Optional[Callable] = None,
        second_deriv: Optional[Callable] = None,
        kernel: DiffKernel = DEFAULT_KERNEL,
    ):
        self.dim = int(dim)
        self._value = value
        self._first = first_deriv
        self._second = second_deriv
        self.kernel = kernel

    @property
    def derivation_mode(self) -> str:
        return "analytic" if self._first is not None else "central-difference"

    def value(self, x):
        g = np.asarray(self._value(np.asarray(x, dtype=float)), dtype=float)
        return 0.5 * (g + g.T)

    def inverse(self, x):
        """Inverse metric via Cholesky; reports the point and smallest eigenvalue on failure."""
        g = self.value(x)
        try:
            factor = cho_factor(g, lower=True)
        except LinAlgError:
            raise DegenerateMetricError(np.asarray(x), float(np.linalg.eigvalsh(g)[0])) from None
        ginv = cho_solve(factor, np.eye(self.dim))
        return 0.5 * (ginv + ginv.T)

    def first_deriv(self, x):
        x = np.asarray(x, dtype=float)
        if self._first is not None:
            d = np.asarray(self._first(x), dtype=float)
        else:
            d = self.kernel.gradient(self.value, x)
        return 0.5 * (d + d.transpose(0, 2, 1))

    def first_deriv_numeric(self, x):
        """Central-difference first derivative regardless of analytic overrides."""
        return self.kernel.gradient(self.value, np.asarray(x, dtype=float))

    def second_deriv(self, x):
        x = np.asarray(x, dtype=float)
        if self._second is not None:
            return np.asarray(self._second(x), dtype=float)
        if self._first is not None:
            return CURVATURE_KERNEL.gradient(self.first_deriv, x)
        return CURVATURE_KERNEL.hessian(self.value, x)


class VectorField:
    """Vector field W^a(x) on the same chart as a MetricField."""

    def __init__(self, dim: int, value: Callable, jacobian: Optional[Callable] = None,
                 kernel: DiffKernel = DEFAULT_KERNEL):
        self.dim = int(dim)
        self._value = value
        self._jacobian = jacobian
        self.kernel = kernel

    def value(self, x):
        return np.asarray(self._value(np.asarray(x, dtype=float)), dtype=float)

    def jacobian(self, x):
        x = np.asarray(x, dtype=float)
        if self._jacobian is not None:
            return np.asarray(self._jacobian(x), dtype=float)
        # gradient stacks d/dx_b on axis 0; we want J[a, b]
        return self.kernel.gradient(self.value, x).T


def zero_field(dim: int) -> VectorField:
    return VectorField(dim, lambda x: np.zeros(dim), lambda x: np.zeros((dim, dim)))


def norm_sq(metric: MetricField, field: VectorField, x) -> float:
    W = field.value(x)
    return float(W @ metric.value(x) @ W)


def _christoffel_from(ginv, dh):
    # T[d, b, c] = d_b h_dc + d_c h_db - d_d h_bc
    T = dh.transpose(1, 0, 2) + dh.transpose(1, 2, 0) - dh
    gamma = 0.5 * np.einsum("ad,dbc->abc", ginv, T)
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def christoffel(metric: MetricField, x):
    """Gamma^a_bc of the Levi-Civita connection at ``x``."""
    return _christoffel_from(metric.inverse(x), metric.first_deriv(x))


def covariant_deriv_w(metric: MetricField, field: VectorField, x):
    """Return (W^b_{|e}, W_{a|e}) as matrices indexed [b, e] and [a, e]."""
    gamma = christoffel(metric, x)
    W = field.value(x)
    upper = field.jacobian(x) + np.einsum("beg,g->be", gamma, W)
    return upper, metric.value(x) @ upper


def grad_norm_sq_w(metric: MetricField, field: VectorField, x):
    """Covector d_c |W|^2 = 2 h^{ab} W_{a|c} W_b."""
    _, lower = covariant_deriv_w(metric, field, x)
    return 2.0 * field.value(x) @ lower


def is_killing(metric: MetricField, field: VectorField, x, tol: float = 1e-10):
    """Return (is_killing, residual) with residual = max |W_{a|b} + W_{b|a}|."""
    _, lower = covariant_deriv_w(metric, field, x)
    residual = float(np.max(np.abs(lower + lower.T)))
    return residual <= tol, residual


def riemann(metric: MetricField, x):
    """R^a_{bcd} with R(d_c, d_d) d_b = R^a_{bcd} d_a."""
    ginv = metric.inverse(x)
    dh = metric.first_deriv(x)
    ddh = metric.second_deriv(x)
    gamma = _christoffel_from(ginv, dh)

    T = dh.transpose(1, 0, 2) + dh.transpose(1, 2, 0) - dh
    # dT[e, d, b, c] = d_e T[d, b, c]
    dT = ddh.transpose(0, 2, 1, 3) + ddh.transpose(0, 2, 3, 1) - ddh
    dginv = -np.einsum("ap,epq,qd->ead", ginv, dh, ginv)
    dgamma = 0.5 * (np.einsum("ead,dbc->eabc", dginv, T) + np.einsum("ad,edbc->eabc", ginv, dT))

    # dgamma[e, a, b, c] = d_e Gamma^a_bc
    R = (
        np.einsum("cadb->abcd", dgamma)
        - np.einsum("dacb->abcd", dgamma)
        + np.einsum("ace,edb->abcd", gamma, gamma)
        - np.einsum("ade,ecb->abcd", gamma, gamma)
    )
    return R


def sectional_curvature(metric: MetricField, x, plane) -> float:
    u, v = (np.asarray(p, dtype=float) for p in plane)
    g = metric.value(x)
    gram = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    if gram < 1e-12:
        raise DegeneratePlaneError(f"degenerate plane: Gram determinant {gram:.3e}")
    R = riemann(metric, x)
    num = np.einsum("f,fa,abcd,b,c,d->", u, g, R, v, u, v)
    return float(num / gram)
