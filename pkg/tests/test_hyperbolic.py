import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randers.errors import DegenerateFrameError, GeometryError, ProfileDomainError
from randers.geometry import is_killing, sectional_curvature
from randers.hyperbolic import (
    LorentzPoint,
    MixedKillingField,
    RotationalSurface,
    chart_navigation,
    hyperboloid_chart,
    in_omega,
    minkowski,
    omega_x1_sq_bound,
    rotational_normal,
    surface_jet,
    surface_point,
)
from randers.immersion import induced_geometry, pairing_df_grad_w
from randers.mean_curvature import mean_form_killing, mean_value_BH
from randers.profiles import (
    ArcLengthProfile,
    SpecialProfile,
    frame_term,
    linear_profile,
    minimal_residual,
    pairing_closed_form,
    principal_lambdas,
    rotational_H,
)

HALF = MixedKillingField(0.5, 0.5)


def test_in_omega_examples():
    assert not in_omega(LorentzPoint([1.0, 0, 0, 0]), MixedKillingField(1, 1))
    assert in_omega(LorentzPoint([1.0, 0, 0, 0]), HALF)
    assert not in_omega(LorentzPoint([np.sqrt(2), 1, 0, 0]), MixedKillingField(1, 0))


def test_lorentz_point_validation():
    with pytest.raises(GeometryError):
        LorentzPoint([1.0, 1.0, 0, 0])
    with pytest.raises(GeometryError):
        LorentzPoint([-1.0, 0, 0, 0])


def test_field_requires_nonzero_strength():
    with pytest.raises(ValueError):
        MixedKillingField(0, 0)


def test_field_norm_matches_minkowski():
    p = surface_point("spherical", 0.7, 0.4, 1.1).coords
    W = HALF.value(p)
    assert HALF.norm_sq(p) == pytest.approx(minkowski(W, W))
    assert minkowski(W, p) == pytest.approx(0.0, abs=1e-14)


def test_chart_at_origin_and_determinant():
    point, metric, field = hyperboloid_chart(np.zeros(3), HALF)
    np.testing.assert_allclose(metric.value(np.zeros(3)), np.eye(3))
    assert point.coords[0] == 1.0
    u = np.array([0.4, -1.2, 0.9])
    assert np.linalg.det(metric.value(u)) == pytest.approx(1 / (1 + u @ u))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_chart_curvature_and_killing(seed):
    rng = np.random.default_rng(seed)
    nav = chart_navigation(MixedKillingField(*rng.uniform(-1, 1, 2)))
    u = rng.normal(size=3)
    assert sectional_curvature(nav.metric, u, rng.normal(size=(2, 3))) == pytest.approx(-1, abs=1e-6)
    ok, res = is_killing(nav.metric, nav.wind, u)
    assert ok, res


def test_surface_point_examples():
    np.testing.assert_allclose(surface_point("spherical", 1, 0, 0).coords, [np.sqrt(2), 0, 1, 0])
    np.testing.assert_allclose(surface_point("hyperbolic", 2, 0, 0).coords, [2, 0, np.sqrt(3), 0])
    with pytest.raises(ProfileDomainError):
        surface_point("hyperbolic", 0.9, 0, 0)
    with pytest.raises(ProfileDomainError):
        surface_point("spherical", 0.0, 0, 0)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["spherical", "hyperbolic"]), st.floats(1.01, 5), st.floats(-3, 3), st.floats(-3, 3))
def test_surface_point_on_hyperboloid(kind, x1, phi, theta):
    assert surface_point(kind, x1, phi, theta).minkowski_residual() < 1e-12 * max(1, x1 ** 2 * np.cosh(3) ** 2)


def bump(t):
    return 0.9 + 0.1 * np.sin(t), 0.1 * np.cos(t), -0.1 * np.sin(t)


def tube(t):
    return 1.4 + 0.1 * np.sin(t), 0.1 * np.cos(t), -0.1 * np.sin(t)


PROFILES = {"spherical": (1, bump), "hyperbolic": (-1, tube)}


@pytest.mark.parametrize("kind", ["spherical", "hyperbolic"])
@pytest.mark.parametrize("t", [0.3, np.pi / 2, 2.0])
def test_explicit_normal(kind, t):
    delta, func = PROFILES[kind]
    prof = ArcLengthProfile(delta, 0.5, func)
    pj = prof.jet(t)
    X, Xa, Xt, _, _, _ = surface_jet(kind, pj, 0.8)
    N = rotational_normal(kind, pj, 0.8)
    assert minkowski(N, N) == pytest.approx(1, abs=1e-10)
    for v in (X, Xa, Xt):
        assert abs(minkowski(N, v)) < 1e-10
    eps = HALF.eps_for(kind)
    assert minkowski(N, HALF.value(X)) == pytest.approx(-eps * pj.d1, abs=1e-10)


def test_degenerate_frame_for_geodesic_profile():
    pj = SpecialProfile(1, 0.5).jet(0.7)
    with pytest.raises(DegenerateFrameError):
        rotational_normal("spherical", pj, 0.1)


@pytest.mark.parametrize("kind", ["spherical", "hyperbolic"])
def test_structural_identities_through_chart_engine(kind):
    delta, func = PROFILES[kind]
    prof = ArcLengthProfile(delta, 0.5, func)
    surf = RotationalSurface(prof, HALF)
    imm = surf.immersion(explicit_normal=True)
    nav = chart_navigation(HALF)
    for t in (0.2, 1.0, 2.5):
        x = np.array([t, 0.6])
        jet = imm.jet(x)
        geom = induced_geometry(nav, jet, normal=imm.normal(x))
        x1, d1, d2 = func(t)
        np.testing.assert_allclose(geom.h, np.diag([1, x1 ** 2]), atol=1e-8)
        assert geom.w == pytest.approx(-0.5 * d1, abs=1e-10)
        assert geom.H == pytest.approx(rotational_H(x1, d1, d2, delta), abs=1e-8)
        assert pairing_df_grad_w(nav, imm, x) == pytest.approx(pairing_closed_form(x1, d1, d2, delta, 0.5), abs=1e-6)
        engine = float(mean_form_killing(nav, jet, geom) @ geom.N)
        assert engine == pytest.approx(mean_value_BH(nav, imm, x, geom.N), abs=1e-8)
        closed = -geom.s * np.sqrt(frame_term(x1, d1, delta)) / x1 * minimal_residual(x1, d1, d2, delta, 0.5)
        assert engine == pytest.approx(closed, abs=1e-6)


def test_principal_curvatures_sum():
    x1, d1, d2 = bump(0.7)
    l1, l2 = principal_lambdas(x1, d1, d2, 1)
    assert rotational_H(x1, d1, d2, 1) == pytest.approx(-(l1 + l2) / 2)


def test_linear_profile_mean_curvature():
    eps = 0.5
    prof = linear_profile(1, eps, 0.7)
    x1, d1, d2 = prof.func(0.2)
    expected = (1 / (3 * eps ** 2) - 2 * x1 ** 2 - 1) / (2 * x1 * np.sqrt(1 + x1 ** 2 - 1 / (3 * eps ** 2)))
    assert rotational_H(x1, d1, d2, 1) == pytest.approx(expected)


def test_geodesic_surface_is_totally_geodesic():
    surf = RotationalSurface(SpecialProfile(1, 0.5), HALF)
    nav = chart_navigation(HALF)
    geom = induced_geometry(nav, surf.immersion().jet(np.array([0.5, 1.0])))
    assert abs(geom.H) < 1e-12
    np.testing.assert_allclose(geom.tau, 0, atol=1e-12)


def test_omega_bound():
    assert omega_x1_sq_bound("spherical", HALF) == pytest.approx(1.5)
    assert omega_x1_sq_bound("hyperbolic", HALF) == pytest.approx(2.5)
    for kind, x1 in (("spherical", 1.2), ("spherical", 1.25), ("hyperbolic", 1.5), ("hyperbolic", 1.6)):
        inside = in_omega(surface_point(kind, x1, 0.3, 0.2), HALF)
        assert inside == (x1 ** 2 < omega_x1_sq_bound(kind, HALF))
