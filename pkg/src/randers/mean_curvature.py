"""Mean curvature forms of submanifolds in Randers spaces.

Closed forms are evaluated from the induced geometry at a single 2-jet.  The
finite-difference oracle instead differentiates the volume density
F(x~, z) directly and assembles the first variation
``H_c = (1/F) [dF/dx~^c - d2F/dz^c_i dz^e_j f^e_ij - d2F/dx~^e dz^c_i f^e_i]``.
"""

from __future__ import annotations

import numpy as np

from .errors import GeometryError, InvalidFrakSError, NotKillingError, OracleIllConditionedError
from .geometry import DiffKernel, grad_norm_sq_w, is_killing
from .immersion import Immersion, ImmersionJet2, induced_geometry, pairing_df_grad_w
from .measure import NavigationData, density, phi

KILLING_TOL = 1e-8
ORACLE_FIRST = DiffKernel(step=1e-4, richardson=True)
ORACLE_SECOND = DiffKernel(step=1e-3, richardson=True)


def _scalars(nav: NavigationData, geom):
    s = geom.s
    if not s > 0:
        raise InvalidFrakSError(f"outside Randers domain: s = {s!r}")
    m = nav.measure
    return m.rho(s), m.drho(s), m.ddrho(s), m.dlogchi(geom.wind_norm_sq)


def _common(geom):
    Wl, Wu, C, P = geom.W_low, geom.W_up, geom.cov_w, geom.P
    bW = geom.B_up @ Wl
    pw = Wl @ P
    v = Wu @ C
    Htau = np.einsum("ij,aij->a", geom.h_inv, geom.tau)
    Wt = geom.W_tangent
    Wtau = np.einsum("i,j,aij->a", Wt, Wt, geom.tau)
    return Wl, C, P, bW, pw, v, Htau, Wtau


def mean_form_general(nav: NavigationData, jet: ImmersionJet2, geom=None):
    """Mean curvature form for an arbitrary (not necessarily Killing) wind, any codimension."""
    geom = geom or induced_geometry(nav, jet)
    r, r1, r2, dlogchi = _scalars(nav, geom)
    Wl, C, P, bW, pw, v, Htau, Wtau = _common(geom)
    QW = (geom.g_inv - geom.B_up) @ Wl
    K = geom.g - geom.B_low

    t1 = (2 * dlogchi / r) * (2 * r1 * (bW @ v) * pw - r * (v @ P))
    t2 = -(
        2 * r1 * (QW @ C @ P)
        + 2 * r1 * np.trace(geom.B_up @ C) * pw
        - 4 * r2 * (QW @ C @ bW) * pw
        + 2 * r1 * ((C @ bW) @ P)
    ) / r
    t3 = -(
        2 * r1 * (pw @ Htau) * pw
        + r * (K @ Htau)
        + 2 * (2 * r2 * (pw @ Wtau) * pw - r1 * (K @ Wtau))
    ) / r
    return t1 + t2 + t3


def mean_form_killing(nav: NavigationData, jet: ImmersionJet2, geom=None, tol: float = KILLING_TOL):
    """Mean curvature form when the wind is Killing; refuses otherwise."""
    geom = geom or induced_geometry(nav, jet)
    residual = float(np.max(np.abs(geom.cov_w + geom.cov_w.T)))
    if residual > tol:
        raise NotKillingError(residual, tol)
    r, r1, r2, dlogchi = _scalars(nav, geom)
    Wl, C, P, bW, pw, v, Htau, Wtau = _common(geom)
    g = geom.g

    t1 = (2 * dlogchi / r) * (2 * r1 * (bW @ v) * pw - r * (v @ P))
    t2 = -(4 * r1 * ((C @ bW) @ P) - 4 * r2 * (bW @ v) * pw + 2 * r1 * (v @ P)) / r
    t3 = -(
        2 * r1 * (Wl @ Htau) * pw
        + r * (g @ Htau)
        + 2 * (2 * r2 * (Wl @ Wtau) * pw - r1 * (g @ Wtau))
    ) / r
    return t1 + t2 + t3


def _require_killing(nav, x):
    ok, residual = is_killing(nav.metric, nav.wind, x, KILLING_TOL)
    if not ok:
        raise NotKillingError(residual, KILLING_TOL)


def _hypersurface_data(nav: NavigationData, immersion: Immersion, x):
    x = np.asarray(x, dtype=float)
    jet = immersion.jet(x)
    if jet.p != 1:
        raise GeometryError("hypersurface mean curvature requires codimension 1")
    _require_killing(nav, jet.point)
    normal = immersion.normal(x) if immersion.normal is not None else None
    geom = induced_geometry(nav, jet, normal=normal)
    pairing = pairing_df_grad_w(nav, immersion, x)
    return geom, pairing


def hypersurface_mean_value(measure, n, H, w, pairing, normal_dot_x, normal_wind_sq=0.0, wind_norm_sq=0.0):
    """Scalar mean curvature of a hypersurface from (H, w, <df(grad w), W~>).

    ``normal_wind_sq`` is N(|W~|^2); it only contributes through (log chi)'.
    """
    s = 1.0 - w * w
    val, dval = phi(measure, s)
    chi_term = measure.dlogchi(wind_norm_sq) * normal_wind_sq
    return -((n * H + chi_term) * val - 2 * pairing * dval) * normal_dot_x / measure.rho(s)


def mean_value_hypersurface(nav: NavigationData, immersion: Immersion, x, X) -> float:
    """H_f(X) for a hypersurface with Killing wind, any (rho, chi) measure."""
    geom, pairing = _hypersurface_data(nav, immersion, x)
    N = geom.N
    n_q = float(grad_norm_sq_w(nav.metric, nav.wind, geom.point) @ N)
    return hypersurface_mean_value(
        nav.measure, geom.n, geom.H, geom.w, pairing, float(N @ geom.g @ np.asarray(X, dtype=float)),
        normal_wind_sq=n_q, wind_norm_sq=geom.wind_norm_sq,
    )


def mean_value_BH(nav: NavigationData, immersion: Immersion, x, X) -> float:
    """BH mean curvature H_f(X) of a hypersurface with Killing wind."""
    if nav.measure.kind != "BH":
        raise ValueError("mean_value_BH requires the Busemann-Hausdorff measure")
    geom, pairing = _hypersurface_data(nav, immersion, x)
    return hypersurface_mean_value(
        nav.measure, geom.n, geom.H, geom.w, pairing, float(geom.N @ geom.g @ np.asarray(X, dtype=float))
    )


def mean_form_oracle(nav: NavigationData, jet: ImmersionJet2,
                     first: DiffKernel = ORACLE_FIRST, second: DiffKernel = ORACLE_SECOND):
    """First variation of the volume density by central differences on (x~, z)."""
    x0 = jet.point
    z0 = jet.z
    m, n = z0.shape
    y0 = np.concatenate([x0, z0.ravel()])

    def F(y):
        try:
            return density(nav, y[:m], y[m:].reshape(m, n))
        except GeometryError as exc:
            raise OracleIllConditionedError(
                f"oracle ill-conditioned: density undefined within the difference stencil ({exc})"
            ) from exc

    F0 = F(y0)
    dF_dx = first.gradient(lambda xx: F(np.concatenate([xx, y0[m:]])), x0)
    hess = second.hessian(F, y0)
    F_xz = hess[:m, m:].reshape(m, m, n)      # [e, c, i]: d2F / dx~^e dz^c_i
    F_zz = hess[m:, m:].reshape(m, n, m, n)   # [c, i, e, j]
    term_zz = np.einsum("ciej,eij->c", F_zz, jet.zz)
    term_xz = np.einsum("eci,ei->c", F_xz, z0)
    return (dF_dx - term_zz - term_xz) / F0
