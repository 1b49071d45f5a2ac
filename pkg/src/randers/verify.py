"""Randomized verification sweeps and the structured report they produce.

Every case draws from its own generator seeded by (seed, suite, index), so a
case is reproducible on its own and results do not depend on evaluation order.
Deviations are measured as ``max|a - b| / max(max|b|, 1)``: relative for forms of
unit size or larger, absolute for small ones.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import GeometryError
from .geometry import grad_norm_sq_w, norm_sq, zero_field
from .immersion import Immersion, induced_geometry, pairing_df_grad_w
from .mean_curvature import (
    mean_form_general,
    mean_form_killing,
    mean_form_oracle,
    mean_value_BH,
    mean_value_hypersurface,
)
from .measure import MeasureSpec, NavigationData
from .models import (
    SpaceForm,
    euclidean_killing,
    euclidean_metric,
    polynomial_field,
    polynomial_immersion,
    polynomial_metric,
    scaled_field,
)

SCHEMA_VERSION = 1
MIN_FRAK_S = 0.05
SUITES = {"oracle": 0, "chain": 1, "lemma": 2, "riemann": 3}

TOLERANCES = {
    "oracle": 1e-5,
    "general_vs_killing": 1e-10,
    "killing_vs_hypersurface": 1e-8,
    "hypersurface_vs_bh": 1e-12,
    "tangent_annihilation": 1e-8,
    "riemannian_reduction": 1e-10,
    "unit_sphere": 1e-6,
}
LEMMA_IDENTITIES = (
    "lemma_wind_projection",
    "lemma_normal_component",
    "lemma_projected_derivative",
    "lemma_mean_wind",
    "lemma_tau_x",
    "lemma_tau_wind",
    "lemma_derivative_normal",
    "lemma_derivative_wind",
)
for _name in LEMMA_IDENTITIES:
    TOLERANCES[_name] = 1e-8


def deviation(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1.0))


@dataclass
class Case:
    nav: NavigationData
    immersion: Immersion
    x: np.ndarray
    measure: str
    n: int
    p: int
    killing: bool
    ambient: str

    @property
    def jet(self):
        return self.immersion.jet(self.x)


def _rng(seed, suite, idx):
    return np.random.default_rng([int(seed), SUITES[suite], int(idx)])


def _ambient(rng, m, killing):
    if not killing:
        return "polynomial", polynomial_metric(rng, m), polynomial_field(rng, m)
    choice = int(rng.integers(3))
    if choice == 0:
        return "euclidean", euclidean_metric(m), euclidean_killing(rng, m)
    sf = SpaceForm(m, 1 if choice == 1 else -1, radius=2.0)
    return ("sphere" if choice == 1 else "hyperbolic"), sf.metric(), sf.killing_field(sf.random_generator(rng))


def make_case(rng, measure: str, n: int, p: int, killing: bool, max_tries: int = 50) -> Case:
    """Random navigation data with |W~| in [0.1, 0.5] at the base point and s >= 0.05."""
    m = n + p
    for _ in range(max_tries):
        ambient, metric, field = _ambient(rng, m, killing)
        x0 = 0.3 * rng.normal(size=m)
        q = norm_sq(metric, field, x0)
        if not q > 1e-12:
            continue
        field = scaled_field(field, rng.uniform(0.1, 0.5) / np.sqrt(q))
        imm = polynomial_immersion(rng, m, n, base=x0, scale=0.5)
        nav = NavigationData(metric, field, MeasureSpec.from_name(measure, n))
        x = np.zeros(n)
        try:
            geom = induced_geometry(nav, imm.jet(x))
        except GeometryError:
            continue
        if geom.s < MIN_FRAK_S:
            continue
        return Case(nav, imm, x, measure, n, p, killing, ambient)
    raise RuntimeError("could not sample an admissible case")


def _combos(measures, codims):
    return [(meas, n, p, k) for meas in measures for n in (1, 2) for p in codims for k in (True, False)]


def _record(suite, idx, seed, case, residuals):
    return {
        "suite": suite,
        "case": idx,
        "seed": seed,
        "measure": case.measure,
        "n": case.n,
        "p": case.p,
        "killing": case.killing,
        "ambient": case.ambient,
        "residuals": {k: float(v) for k, v in residuals.items()},
    }


def oracle_suite(cases: int, seed: int, measures=("BH", "HT"), codims=(1, 2)):
    """Closed-form mean curvature form against the finite-difference oracle."""
    combos = _combos(measures, codims)
    out = []
    for idx in range(cases):
        meas, n, p, killing = combos[idx % len(combos)]
        case = make_case(_rng(seed, "oracle", idx), meas, n, p, killing)
        jet = case.jet
        res = {"oracle": deviation(mean_form_general(case.nav, jet), mean_form_oracle(case.nav, jet))}
        out.append(_record("oracle", idx, seed, case, res))
    return out


def chain_suite(cases: int, seed: int, measures=("BH", "HT"), codims=(1, 2)):
    """General form -> Killing form -> hypersurface scalar -> BH scalar, on Killing winds."""
    combos = [(meas, n, p) for meas in measures for n in (1, 2) for p in codims]
    out = []
    for idx in range(cases):
        meas, n, p = combos[idx % len(combos)]
        rng = _rng(seed, "chain", idx)
        case = make_case(rng, meas, n, p, True)
        jet = case.jet
        geom = induced_geometry(case.nav, jet)
        kill = mean_form_killing(case.nav, jet, geom)
        res = {"general_vs_killing": deviation(mean_form_general(case.nav, jet, geom), kill)}
        if p == 1:
            X = rng.normal(size=n + p)
            hyp = mean_value_hypersurface(case.nav, case.immersion, case.x, X)
            res["killing_vs_hypersurface"] = deviation(hyp, kill @ X)
            res["tangent_annihilation"] = float(np.max(np.abs(kill @ geom.z)))
            if meas == "BH":
                res["hypersurface_vs_bh"] = deviation(mean_value_BH(case.nav, case.immersion, case.x, X), hyp)
        out.append(_record("chain", idx, seed, case, res))
    return out


def lemma_residuals(nav: NavigationData, immersion: Immersion, x, X) -> dict:
    """Residuals of the eight hypersurface identities for a Killing wind."""
    geom = induced_geometry(nav, immersion.jet(x), normal=immersion.normal(x) if immersion.normal else None)
    g, N, Wl, Wu, C, P = geom.g, geom.N, geom.W_low, geom.W_up, geom.cov_w, geom.P
    X = np.asarray(X, dtype=float)
    w = geom.w
    NX = float(N @ g @ X)
    dfW = geom.z @ geom.W_tangent
    bW = geom.B_up @ Wl
    D = C @ dfW                          # lowered nabla_{df(W)} W~
    Nq = float(grad_norm_sq_w(nav.metric, nav.wind, geom.point) @ N)
    pairing = pairing_df_grad_w(nav, immersion, x)
    Htau = np.einsum("ij,aij->a", geom.h_inv, geom.tau)
    Wt = geom.W_tangent
    Wtau = np.einsum("i,j,aij->a", Wt, Wt, geom.tau)
    bracket = -(pairing + 0.5 * Nq)
    pairs = {
        "lemma_wind_projection": (Wu @ C @ bW, D @ Wu),
        "lemma_normal_component": (Wl @ P @ X, w * NX),
        "lemma_projected_derivative": ((C @ bW) @ P @ X, (D @ N) * NX),
        "lemma_mean_wind": (Wl @ Htau, geom.n * geom.H * w),
        "lemma_tau_x": (Wtau @ g @ X, bracket * NX),
        "lemma_tau_wind": (Wtau @ Wl, bracket * w),
        "lemma_derivative_normal": (D @ N, -0.5 * Nq),
        "lemma_derivative_wind": (D @ Wu, -0.5 * Nq * w),
    }
    return {k: abs(float(a) - float(b)) / max(1.0, abs(float(b))) for k, (a, b) in pairs.items()}


def lemma_suite(cases: int, seed: int):
    out = []
    for idx in range(cases):
        rng = _rng(seed, "lemma", idx)
        m = 3 + idx % 2
        case = make_case(rng, "BH", m - 1, 1, True)
        res = lemma_residuals(case.nav, case.immersion, case.x, rng.normal(size=m))
        out.append(_record("lemma", idx, seed, case, res))
    return out


def unit_sphere_immersion() -> Immersion:
    """Unit sphere in R^3 by spherical angles, with analytic derivatives."""

    def f(x):
        u, v = x
        return np.array([np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)])

    def jac(x):
        u, v = x
        return np.array([
            [np.cos(u) * np.cos(v), -np.sin(u) * np.sin(v)],
            [np.cos(u) * np.sin(v), np.sin(u) * np.cos(v)],
            [-np.sin(u), 0.0],
        ])

    def hess(x):
        u, v = x
        H = np.empty((3, 2, 2))
        H[:, 0, 0] = -f(x)
        H[:, 0, 1] = H[:, 1, 0] = [-np.cos(u) * np.sin(v), np.cos(u) * np.cos(v), 0.0]
        H[:, 1, 1] = [-np.sin(u) * np.cos(v), -np.sin(u) * np.sin(v), 0.0]
        return H

    return Immersion(f, 2, jac, hess)


def riemann_suite(cases: int, seed: int, measures=("BH", "HT")):
    """W~ = 0: H_f(X) + n H <N, X> = 0, plus the unit sphere against the oracle."""
    out = []
    for idx in range(cases):
        rng = _rng(seed, "riemann", idx)
        meas = measures[idx % len(measures)]
        n = 1 + idx % 2
        m = n + 1
        metric = polynomial_metric(rng, m)
        x0 = 0.3 * rng.normal(size=m)
        imm = polynomial_immersion(rng, m, n, base=x0, scale=0.5)
        nav = NavigationData(metric, zero_field(m), MeasureSpec.from_name(meas, n))
        case = Case(nav, imm, np.zeros(n), meas, n, 1, True, "polynomial")
        geom = induced_geometry(nav, case.jet)
        X = rng.normal(size=m)
        val = mean_form_general(nav, case.jet, geom) @ X
        res = {"riemannian_reduction": abs(val + geom.n * geom.H * float(geom.N @ geom.g @ X))}
        out.append(_record("riemann", idx, seed, case, res))

    sphere = unit_sphere_immersion()
    nav = NavigationData(euclidean_metric(3), zero_field(3), MeasureSpec.bh(2))
    x = np.array([0.9, 0.4])
    jet = sphere.jet(x)
    geom = induced_geometry(nav, jet)
    case = Case(nav, sphere, x, "BH", 2, 1, True, "euclidean")
    res = {"unit_sphere": abs(float(mean_form_oracle(nav, jet) @ geom.N) + 2 * geom.H)}
    out.append(_record("riemann", cases, seed, case, res))
    return out


def summarize(records: Iterable[dict], tolerances=None) -> dict:
    """Grade each record in place and collect the worst residual per class."""
    tolerances = tolerances or TOLERANCES
    records = list(records)
    classes = {}
    for rec in records:
        rec["pass"] = all(v <= tolerances[k] for k, v in rec["residuals"].items())
        for name, val in rec["residuals"].items():
            c = classes.setdefault(name, {"count": 0, "worst": 0.0, "tolerance": tolerances[name]})
            c["count"] += 1
            c["worst"] = max(c["worst"], val)
    for name, c in classes.items():
        c["pass"] = c["worst"] <= c["tolerance"]
    failed = sum(not r["pass"] for r in records)
    return {
        "cases": len(records),
        "passed": len(records) - failed,
        "failed": failed,
        "classes": dict(sorted(classes.items())),
        "pass": failed == 0,
    }


def run_verification(cases: int = 200, seed: int = 7, measure: str = "both", codim=None, tol=None) -> dict:
    """Run every suite and assemble the report; ``timing`` is the only nondeterministic field."""
    if cases < 1:
        raise ValueError("--cases must be at least 1")
    measures = ("BH", "HT") if measure == "both" else (measure.upper(),)
    codims = (1, 2) if codim is None else (int(codim),)
    tolerances = dict(TOLERANCES)
    if tol is not None:
        tolerances["oracle"] = tol
    started = time.perf_counter()
    records = oracle_suite(cases, seed, measures, codims)
    records += chain_suite(cases, seed, measures, codims)
    if 1 in codims:
        records += lemma_suite(cases, seed)
        records += riemann_suite(cases, seed, measures)
    elapsed = time.perf_counter() - started
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {"cases": cases, "seed": seed, "measure": measure, "codim": codim,
                   "oracle_tolerance": tolerances["oracle"]},
        "summary": summarize(records, tolerances),
        "records": records,
        "timing": {"wall_seconds": elapsed},
    }
