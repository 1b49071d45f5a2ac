import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randers.errors import InvalidFrakSError, OutsideRandersDomainError, ZeroVectorError
from randers.geometry import VectorField, zero_field
from randers.measure import MeasureSpec, NavigationData, density, phi, randers_norm
from randers.models import euclidean_metric


def constant_wind(vec):
    vec = np.asarray(vec, dtype=float)
    return VectorField(len(vec), lambda x: vec, lambda x: np.zeros((len(vec), len(vec))))


def test_bh_phi_vanishes_at_two_thirds():
    val, _ = phi(MeasureSpec.bh(2), 2 / 3)
    assert abs(val) < 1e-15


def test_ht_phi_value():
    assert phi(MeasureSpec.ht(2), 0.25)[0] == pytest.approx(2.0)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("kind", ["BH", "HT"])
def test_closed_form_phi_matches_generic(kind, n):
    m = MeasureSpec.from_name(kind, n)
    generic = MeasureSpec.custom(n, m.rho, m.drho, m.ddrho, m.chi, m.dlogchi)
    for s in (0.1, 0.5, 0.9, 1.0):
        np.testing.assert_allclose(phi(m, s), phi(generic, s), rtol=1e-12)


def test_phi_derivative_by_differences():
    m = MeasureSpec.bh(3)
    h = 1e-6
    for s in (0.3, 0.7):
        fd = (phi(m, s + h)[0] - phi(m, s - h)[0]) / (2 * h)
        assert phi(m, s)[1] == pytest.approx(fd, rel=1e-7)


def test_invalid_s():
    with pytest.raises(InvalidFrakSError):
        phi(MeasureSpec.bh(2), 0.0)


def test_density_without_wind_is_riemannian_volume():
    nav = NavigationData(euclidean_metric(3), zero_field(3), MeasureSpec.bh(2))
    z = np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 0.0]])
    assert density(nav, np.zeros(3), z) == pytest.approx(2.0)


def test_density_outside_domain():
    nav = NavigationData(euclidean_metric(2), constant_wind([1.05, 0.0]), MeasureSpec.bh(1))
    with pytest.raises(OutsideRandersDomainError):
        density(nav, np.zeros(2), np.array([[1.0], [0.0]]))
    # the unrestricted copy evaluates anyway
    assert np.isfinite(density(nav.unrestricted(), np.zeros(2), np.array([[1.0], [0.0]])))


def test_bh_curve_density_is_harmonic_mean():
    # on a curve the BH unit ball is the interval [-1/F(-y), 1/F(y)]
    nav = NavigationData(euclidean_metric(2), constant_wind([0.3, 0.2]), MeasureSpec.bh(1))
    y = np.array([0.7, -1.1])
    fwd, bwd = randers_norm(nav, np.zeros(2), y), randers_norm(nav, np.zeros(2), -y)
    assert density(nav, np.zeros(2), y[:, None]) == pytest.approx(2 / (1 / fwd + 1 / bwd), rel=1e-12)


def test_randers_norm_zero_vector():
    nav = NavigationData(euclidean_metric(2), zero_field(2), MeasureSpec.bh(1))
    with pytest.raises(ZeroVectorError):
        randers_norm(nav, np.zeros(2), np.zeros(2))


vectors = st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3).filter(
    lambda v: np.linalg.norm(v) > 1e-3)
winds = st.lists(st.floats(-0.55, 0.55, allow_nan=False), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(vectors, winds, st.floats(0.1, 10))
def test_randers_norm_navigation_identity(y, w, lam):
    y, w = np.array(y), np.array(w)
    nav = NavigationData(euclidean_metric(3), constant_wind(w), MeasureSpec.bh(1))
    F = randers_norm(nav, np.zeros(3), y)
    assert F > 0
    assert np.linalg.norm(y / F - w) == pytest.approx(1.0, rel=1e-9)
    assert randers_norm(nav, np.zeros(3), lam * y) == pytest.approx(lam * F, rel=1e-9)
