"""Grid meshes of rotational surfaces in H^3 with per-vertex BH residuals.

Each vertex carries its Lorentz point, the Poincare-ball projection, w, s and
|H_f(N)| evaluated by the general mean-curvature engine on the hyperboloid
chart.  Vertices outside Omega keep their residual but are flagged and left out
of the statistics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import EmptyRegionError, GeometryError, ProfileDomainError
from .hyperbolic import MixedKillingField, RotationalSurface, chart_navigation
from .immersion import induced_geometry
from .mean_curvature import mean_form_killing
from .measure import MeasureSpec
from .profiles import (
    SPHERICAL,
    ClosedFormProfile,
    Profile,
    SpecialProfile,
    check_s_range,
    check_type,
    frame_term,
    linear_profile,
    type_delta,
    DEFAULT_MARGIN,
)

QUANTILES = (0.5, 0.9, 0.99)


@dataclass
class SurfaceMesh:
    kind: str
    param: str
    params: np.ndarray                 # profile parameter of each kept row
    thetas: np.ndarray
    points: np.ndarray                 # (V, 4) Lorentz coordinates
    faces: np.ndarray                  # (F, 3) zero-based vertex indices
    w: np.ndarray
    sfrak: np.ndarray
    residual: np.ndarray
    in_omega: np.ndarray
    periodic: bool
    skipped_rows: int = 0
    measure: str = "BH"
    meta: dict = dc_field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    def vertex_params(self):
        """(param, theta) of every vertex, row-major."""
        a = np.repeat(self.params, len(self.thetas))
        th = np.tile(self.thetas, len(self.params))
        return a, th

    def poincare(self):
        return self.points[:, 1:] / (1 + self.points[:, :1])

    def minkowski_residuals(self):
        return np.abs(np.einsum("va,va->v", self.points * np.array([-1, 1, 1, 1]), self.points) + 1)

    def stats(self) -> dict:
        """Residual statistics over in-Omega vertices with finite residual."""
        sel = self.in_omega & np.isfinite(self.residual)
        out = {
            "vertices": int(self.n_vertices),
            "in_omega": int(np.count_nonzero(self.in_omega)),
            "in_omega_fraction": float(np.count_nonzero(self.in_omega) / max(self.n_vertices, 1)),
            "skipped_rows": int(self.skipped_rows),
            "max_minkowski_residual": float(self.minkowski_residuals().max()),
            "max_poincare_norm": float(np.linalg.norm(self.poincare(), axis=1).max()),
        }
        if np.any(sel):
            r = self.residual[sel]
            out.update(
                max=float(r.max()),
                mean=float(r.mean()),
                quantiles={str(q): float(np.quantile(r, q)) for q in QUANTILES},
            )
        else:
            out.update(max=None, mean=None, quantiles=None)
        return out

    def write_obj(self, path):
        with open(path, "w") as fh:
            fh.write(f"# rotational surface ({self.kind}), Poincare ball coordinates\n")
            for q in self.poincare():
                fh.write("v {:.17g} {:.17g} {:.17g}\n".format(*q))
            for i, j, k in self.faces + 1:
                fh.write(f"f {i} {j} {k}\n")

    def write_csv(self, path):
        a, th = self.vertex_params()
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow([self.param, "theta", "p1", "p2", "p3", "p4", "w", "sfrak", "residual", "in_omega"])
            for k in range(self.n_vertices):
                row = [a[k], th[k], *self.points[k], self.w[k], self.sfrak[k], self.residual[k]]
                wr.writerow([f"{v:.17g}" for v in row] + [int(self.in_omega[k])])


def build_profile(kind: str, family: str, field: MixedKillingField, energy: Optional[float] = None,
                  branch: int = 1, phi_sign: int = 1, offset: Optional[float] = None,
                  slope_sign: int = 1) -> Profile:
    """Profile for one of the families: 'closed-form', 'geodesic' or 'linear'."""
    delta = type_delta(kind)
    eps = field.eps_for(kind)
    if family == "closed-form":
        if energy is None or energy == 0:
            raise ValueError("closed-form surfaces need a nonzero energy E")
        if eps == 0:
            raise ValueError(f"the {kind} type needs a nonzero Killing strength")
        return ClosedFormProfile(delta, eps, energy, branch=branch, sign=phi_sign)
    if family == "geodesic":
        return SpecialProfile(delta, eps)
    if family == "linear":
        if eps == 0:
            raise ValueError("linear profiles need a nonzero Killing strength")
        c = offset if offset is not None else (0.7 if delta == SPHERICAL else 1.54)
        return linear_profile(delta, eps, c, slope_sign)
    raise ValueError(f"unknown family {family!r}")


def _theta_grid(kind, theta_range, n_theta):
    if n_theta < 2:
        raise ValueError("n_theta must be at least 2")
    if theta_range is None:
        theta_range = (0.0, 2 * np.pi) if kind == "spherical" else (-1.0, 1.0)
    lo, hi = theta_range
    if not lo < hi:
        raise ValueError("theta range must satisfy theta_min < theta_max")
    periodic = kind == "spherical" and hi - lo >= 2 * np.pi - 1e-12
    if periodic:
        return lo + 2 * np.pi * np.arange(n_theta) / n_theta, True
    return np.linspace(lo, hi, n_theta), False


def _faces(rows, n_theta, periodic):
    """Two triangles per grid cell between consecutive kept rows."""
    faces = []
    ncols = n_theta if periodic else n_theta - 1
    for r in range(len(rows) - 1):
        if rows[r + 1] != rows[r] + 1:
            continue
        for c in range(ncols):
            c1 = (c + 1) % n_theta
            a, b = r * n_theta + c, r * n_theta + c1
            d, e = (r + 1) * n_theta + c, (r + 1) * n_theta + c1
            faces.append((a, d, b))
            faces.append((b, d, e))
    return np.array(faces, dtype=int).reshape(-1, 3)


def vertex_residual(nav, surf: RotationalSurface, a, theta, phi_val, explicit_normal: bool):
    """(w, s, |H_f(N)|) at one vertex through the chart engine; NaNs if undefined."""
    imm = surf.immersion(explicit_normal=explicit_normal, phi_lookup=lambda _a: phi_val)
    x = np.array([a, theta])
    try:
        jet = imm.jet(x)
        geom = induced_geometry(nav, jet, normal=imm.normal(x) if explicit_normal else None)
        form = mean_form_killing(nav, jet, geom)
    except GeometryError:
        return np.nan, np.nan, np.nan
    return geom.w, geom.s, abs(float(form @ geom.N))


def generate_mesh(profile: Profile, field: MixedKillingField, a_range, n_a: int,
                  theta_range=None, n_theta: int = 32, measure: str = "BH",
                  x1_scale: float = 1.0, margin: float = DEFAULT_MARGIN) -> SurfaceMesh:
    """Sample a rotational surface on an (a, theta) grid and evaluate residuals.

    ``a`` is s for closed-form profiles and arc length t otherwise.  Rows whose
    x1 leaves the type domain, or whose frame degenerates, are skipped.
    """
    if n_a < 2:
        raise ValueError("n_s must be at least 2")
    lo, hi = map(float, a_range)
    if isinstance(profile, ClosedFormProfile):
        check_s_range(lo, hi, profile.eps, margin)
        profile.s_ref = lo
    elif not lo < hi:
        raise ValueError("parameter range must satisfy min < max")
    kind = profile.kind
    thetas, periodic = _theta_grid(kind, theta_range, n_theta)
    grid = np.linspace(lo, hi, n_a)
    surf = RotationalSurface(profile, field, x1_scale=x1_scale)
    nav = chart_navigation(field, MeasureSpec.from_name(measure, 2)).unrestricted()
    explicit = not profile.degenerate()

    valid = []
    for k, a in enumerate(grid):
        try:
            pj = surf.profile_jet(a, 0.0)
            check_type(pj.x1, profile.delta)
            if explicit and not frame_term(*pj.arc_length_derivatives(profile.delta)[:2], profile.delta) > 0:
                continue
        except (ProfileDomainError, FloatingPointError):
            continue
        valid.append(k)
    if not valid:
        raise EmptyRegionError("no samples in Omega: every row leaves the profile domain")
    rows = np.array(valid)
    phis = profile.phi_values(grid[rows])

    pts, ws, ss, res, inside = [], [], [], [], []
    for a, ph in zip(grid[rows], phis):
        for th in thetas:
            p = surf.point(a, th, ph).coords
            w, s, r = vertex_residual(nav, surf, a, th, ph, explicit)
            pts.append(p)
            ws.append(w)
            ss.append(s)
            res.append(r)
            inside.append(field.norm_sq(p) < 1)
    mesh = SurfaceMesh(
        kind=kind,
        param=profile.param,
        params=grid[rows],
        thetas=thetas,
        points=np.array(pts),
        faces=_faces(rows, len(thetas), periodic),
        w=np.array(ws),
        sfrak=np.array(ss),
        residual=np.array(res),
        in_omega=np.array(inside, dtype=bool),
        periodic=periodic,
        skipped_rows=n_a - len(rows),
        measure=measure.upper(),
    )
    if not np.any(mesh.in_omega):
        raise EmptyRegionError("no samples in Omega")
    return mesh
