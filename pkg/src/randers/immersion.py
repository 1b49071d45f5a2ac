"""Pointwise induced geometry of an immersion f: M^n -> (M~^{n+p}, h~).

Array layouts: ``z[a, i] = d f^a / d x^i`` and ``zz[a, i, j] = d^2 f^a / dx^i dx^j``.
The Riemannian mean curvature of a hypersurface follows the convention
``h^{ij} tau^a_ij d_a = n H N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateJetError, GeometryError
from .geometry import DiffKernel, christoffel, covariant_deriv_w
from .measure import NavigationData, frak_s

W_KERNEL = DiffKernel(step=1e-5, richardson=True)


@dataclass(frozen=True)
class ImmersionJet2:
    point: np.ndarray
    z: np.ndarray
    zz: np.ndarray
    x: Optional[np.ndarray] = None

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        zz = np.asarray(self.zz, dtype=float)
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "zz", zz)
        if z.ndim != 2 or z.shape[0] <= z.shape[1]:
            raise DegenerateJetError(f"jet z must be (n+p) x n with p >= 1, got {z.shape}")
        if zz.shape != (z.shape[0], z.shape[1], z.shape[1]):
            raise DegenerateJetError(f"second jet has shape {zz.shape}, expected {(z.shape[0],) + z.shape[1:] * 2}")
        if np.linalg.matrix_rank(z) < z.shape[1]:
            raise DegenerateJetError("degenerate immersion jet: z is rank deficient")
        asym = np.max(np.abs(zz - zz.transpose(0, 2, 1))) if zz.size else 0.0
        if asym > 1e-12 * max(1.0, np.max(np.abs(zz))):
            raise DegenerateJetError(f"second jet not symmetric in (i, j): {asym:.2e}")

    @property
    def n(self) -> int:
        return self.z.shape[1]

    @property
    def p(self) -> int:
        return self.z.shape[0] - self.z.shape[1]


class Immersion:
    """An immersion given as a callable ``f(x) -> point`` with optional analytic derivatives.

    ``normal`` optionally overrides the unit normal (hypersurfaces only), and
    ``dw`` registers an analytic gradient d w / d x^j.
    """

    def __init__(self, f: Callable, n: int, jacobian: Optional[Callable] = None,
                 hessian: Optional[Callable] = None, normal: Optional[Callable] = None,
                 dw: Optional[Callable] = None, kernel: DiffKernel = DiffKernel(step=1e-4, richardson=True)):
        self.f = f
        self.n = n
        self._jacobian = jacobian
        self._hessian = hessian
        self.normal = normal
        self.dw = dw
        self.kernel = kernel

    def jacobian(self, x):
        x = np.asarray(x, dtype=float)
        if self._jacobian is not None:
            return np.asarray(self._jacobian(x), dtype=float)
        return np.moveaxis(self.kernel.gradient(self.f, x), 0, -1)

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        if self._hessian is not None:
            return np.asarray(self._hessian(x), dtype=float)
        if self._jacobian is not None:
            d = self.kernel.gradient(self.jacobian, x)  # [j, a, i]
            d = np.moveaxis(d, 0, -1)
        else:
            d = np.moveaxis(self.kernel.hessian(self.f, x), (0, 1), (-2, -1))
        return 0.5 * (d + d.transpose(0, 2, 1))

    def jet(self, x) -> ImmersionJet2:
        x = np.asarray(x, dtype=float)
        return ImmersionJet2(np.asarray(self.f(x), dtype=float), self.jacobian(x), self.hessian(x), x)


@dataclass(frozen=True)
class InducedGeometry:
    n: int
    p: int
    point: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    gamma: np.ndarray
    z: np.ndarray
    h: np.ndarray
    h_inv: np.ndarray
    A_up: np.ndarray
    A_low: np.ndarray
    B_up: np.ndarray
    B_mix: np.ndarray
    B_low: np.ndarray
    P: np.ndarray
    tau: np.ndarray
    W_up: np.ndarray
    W_low: np.ndarray
    W_i: np.ndarray
    cov_w: np.ndarray
    wind_norm_sq: float
    W_norm_sq_h: float
    s: float
    N: Optional[np.ndarray] = None
    H: Optional[float] = None
    w: Optional[float] = None

    @property
    def W_tangent(self):
        """W^j = A^{j a} W~_a, the tangential projection of the wind."""
        return self.A_up @ self.W_low

    def require_hypersurface(self):
        if self.p != 1:
            raise GeometryError(f"unit normal requested for codimension p = {self.p}")


def _oriented_normal(g, P, z):
    m = g.shape[0]
    cols = P.T  # rows are P e_k as candidate normal directions
    norms = np.einsum("ka,ab,kb->k", cols, g, cols)
    v = cols[int(np.argmax(norms))]
    N = v / np.sqrt(v @ g @ v)
    if np.linalg.det(np.column_stack([z, N])) < 0:
        N = -N
    return N


def _checked_normal(g, z, N):
    N = np.asarray(N, dtype=float)
    nn = N @ g @ N
    if abs(nn - 1.0) > 1e-8 or np.max(np.abs(z.T @ g @ N)) > 1e-8:
        raise GeometryError("supplied normal is not a unit normal of the immersion")
    return N


def _tangent_frame(nav: NavigationData, x, z):
    g = nav.metric.value(x)
    h = z.T @ g @ z
    try:
        np.linalg.cholesky(h)
    except np.linalg.LinAlgError:
        raise DegenerateJetError("degenerate immersion jet: induced metric not positive definite") from None
    h_inv = np.linalg.inv(h)
    h_inv = 0.5 * (h_inv + h_inv.T)
    A_up = h_inv @ z.T
    B_up = z @ A_up
    B_mix = B_up @ g
    return g, h, h_inv, A_up, B_up, B_mix


def induced_geometry(nav: NavigationData, jet: ImmersionJet2, normal=None) -> InducedGeometry:
    x = jet.point
    z = jet.z
    n, p = jet.n, jet.p
    g, h, h_inv, A_up, B_up, B_mix = _tangent_frame(nav, x, z)
    g_inv = nav.metric.inverse(x)
    gamma = christoffel(nav.metric, x)
    m = n + p
    P = np.eye(m) - B_mix

    K = jet.zz + np.einsum("etd,tj,di->eij", gamma, z, z)
    tau = np.einsum("ae,eij->aij", P, K)

    q = nav.wind_norm_sq(x)
    W_up = nav.wind.value(x)
    W_low = g @ W_up
    W_i = z.T @ W_low
    _, cov_w = covariant_deriv_w(nav.metric, nav.wind, x)

    fields = dict(
        n=n, p=p, point=x, g=g, g_inv=g_inv, gamma=gamma, z=z, h=h, h_inv=h_inv,
        A_up=A_up, A_low=A_up @ g, B_up=B_up, B_mix=B_mix, B_low=g @ B_up @ g, P=P,
        tau=tau, W_up=W_up, W_low=W_low, W_i=W_i, cov_w=cov_w, wind_norm_sq=q,
        W_norm_sq_h=float(W_i @ h_inv @ W_i), s=0.0,
    )
    if p == 1:
        N = _oriented_normal(g, P, z) if normal is None else _checked_normal(g, z, normal)
        mean_vec = np.einsum("ij,aij->a", h_inv, tau)
        fields.update(N=N, H=float(mean_vec @ g @ N) / n, w=float(N @ W_low))
    geom = InducedGeometry(**fields)
    object.__setattr__(geom, "s", frak_s(geom))
    return geom


def second_fundamental_form(nav: NavigationData, jet: ImmersionJet2):
    """tau^a_ij = (delta^a_e - B^a_e)(z^e_ij + Gamma~^e_td z^t_j z^d_i)."""
    return induced_geometry(nav, jet).tau


def second_fundamental_form_intrinsic(nav: NavigationData, jet: ImmersionJet2):
    """tau^a_ij = z^a_ij + Gamma~ z z - Gamma^k_ij z^a_k with the induced Christoffel symbols."""
    x, z = jet.point, jet.z
    g, h, h_inv, A_up, B_up, B_mix = _tangent_frame(nav, x, z)
    gamma = christoffel(nav.metric, x)
    K = jet.zz + np.einsum("etd,tj,di->eij", gamma, z, z)
    induced_gamma = np.einsum("ke,eij->kij", A_up @ g, K)
    return K - np.einsum("ak,kij->aij", z, induced_gamma)


def normal_and_w(nav: NavigationData, immersion: Immersion, x):
    """Unit normal and w = <N, W~> from first derivatives only."""
    x = np.asarray(x, dtype=float)
    pt = np.asarray(immersion.f(x), dtype=float)
    z = immersion.jacobian(x)
    if z.shape[0] - z.shape[1] != 1:
        raise GeometryError("w is only defined for hypersurfaces")
    g, h, h_inv, A_up, B_up, B_mix = _tangent_frame(nav, pt, z)
    if immersion.normal is not None:
        N = _checked_normal(g, z, immersion.normal(x))
    else:
        N = _oriented_normal(g, np.eye(g.shape[0]) - B_mix, z)
    return N, float(N @ g @ nav.wind.value(pt))


def pairing_df_grad_w(nav: NavigationData, immersion: Immersion, x, kernel: DiffKernel = W_KERNEL) -> float:
    """<df(grad w), W~> = h^{ij} (d w / d x^j) <z_i, W~>."""
    x = np.asarray(x, dtype=float)
    if immersion.dw is not None:
        dw = np.asarray(immersion.dw(x), dtype=float)
    else:
        dw = kernel.gradient(lambda y: normal_and_w(nav, immersion, y)[1], x)
    pt = np.asarray(immersion.f(x), dtype=float)
    z = immersion.jacobian(x)
    if z.shape[0] - z.shape[1] != 1:
        raise GeometryError("pairing_df_grad_w requires a hypersurface")
    g = nav.metric.value(pt)
    h_inv = np.linalg.inv(z.T @ g @ z)
    return float(dw @ h_inv @ (z.T @ g @ nav.wind.value(pt)))
