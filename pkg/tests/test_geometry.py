import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randers.errors import DegenerateMetricError, DegeneratePlaneError
from randers.geometry import (
    DiffKernel,
    MetricField,
    VectorField,
    christoffel,
    covariant_deriv_w,
    is_killing,
    norm_sq,
    riemann,
    sectional_curvature,
)
from randers.models import SpaceForm, euclidean_killing, euclidean_metric, polar_metric, polynomial_metric


def test_polar_christoffel():
    r = 2.0
    gamma = christoffel(polar_metric(), np.array([r, 0.3]))
    assert gamma[0, 1, 1] == pytest.approx(-r)
    assert gamma[1, 0, 1] == pytest.approx(1 / r)
    assert gamma[1, 1, 0] == pytest.approx(1 / r)
    assert abs(gamma[0, 0, 0]) < 1e-14


def test_numeric_derivatives_match_analytic():
    rng = np.random.default_rng(3)
    analytic = polynomial_metric(rng, 3)
    numeric = MetricField(3, analytic.value)
    x = 0.2 * rng.normal(size=3)
    assert numeric.derivation_mode != analytic.derivation_mode
    np.testing.assert_allclose(numeric.first_deriv(x), analytic.first_deriv(x), atol=1e-8)
    np.testing.assert_allclose(christoffel(numeric, x), christoffel(analytic, x), atol=1e-8)


def test_richardson_improves_gradient():
    f = lambda x: np.sin(3 * x[0]) * np.exp(x[1])
    x = np.array([0.4, -0.2])
    exact = np.array([3 * np.cos(1.2) * np.exp(-0.2), np.sin(1.2) * np.exp(-0.2)])
    plain = DiffKernel(1e-2).gradient(f, x)
    rich = DiffKernel(1e-2, richardson=True).gradient(f, x)
    assert np.max(np.abs(rich - exact)) < 1e-2 * np.max(np.abs(plain - exact))


def test_degenerate_metric_rejected():
    metric = MetricField(2, lambda x: np.diag([1.0, 0.0]))
    with pytest.raises(DegenerateMetricError):
        metric.inverse(np.zeros(2))


def test_rotation_is_killing_and_translation_of_polar_is_not():
    rot = VectorField(2, lambda x: np.array([-x[1], x[0]]), lambda x: np.array([[0.0, -1.0], [1.0, 0.0]]))
    ok, res = is_killing(euclidean_metric(2), rot, np.array([0.3, 0.7]))
    assert ok and res < 1e-14
    radial = VectorField(2, lambda x: np.array([1.0, 0.0]), lambda x: np.zeros((2, 2)))
    ok, res = is_killing(polar_metric(), radial, np.array([1.5, 0.2]))
    assert not ok and res > 0.1


@pytest.mark.parametrize("sign,radius", [(1, 1.0), (-1, 1.0), (1, 2.0), (-1, 0.5)])
def test_space_form_curvature(sign, radius):
    sf = SpaceForm(3, sign, radius)
    rng = np.random.default_rng(11)
    for _ in range(5):
        u = 0.2 * radius * rng.normal(size=3)
        plane = rng.normal(size=(2, 3))
        assert sectional_curvature(sf.metric(), u, plane) == pytest.approx(sign / radius ** 2, abs=1e-9)


def test_space_form_second_derivatives():
    sf = SpaceForm(3, -1, 1.0)
    metric = sf.metric()
    u = np.array([0.3, -0.1, 0.5])
    numeric = DiffKernel(1e-4, True).gradient(metric.first_deriv, u)
    np.testing.assert_allclose(metric.second_deriv(u), numeric, atol=1e-8)


def test_riemann_symmetries():
    rng = np.random.default_rng(5)
    metric = polynomial_metric(rng, 3)
    x = 0.1 * rng.normal(size=3)
    R = riemann(metric, x)
    Rl = np.einsum("ae,ebcd->abcd", metric.value(x), R)
    np.testing.assert_allclose(Rl, -Rl.transpose(0, 1, 3, 2), atol=1e-8)
    np.testing.assert_allclose(Rl, -Rl.transpose(1, 0, 2, 3), atol=1e-8)
    np.testing.assert_allclose(Rl, Rl.transpose(2, 3, 0, 1), atol=1e-8)


def test_degenerate_plane():
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(euclidean_metric(3), np.zeros(3), ([1.0, 0, 0], [2.0, 0, 0]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_space_form_killing_fields(seed):
    rng = np.random.default_rng(seed)
    sf = SpaceForm(3, 1 if seed % 2 else -1, 1.5)
    field = sf.killing_field(sf.random_generator(rng))
    u = 0.3 * rng.normal(size=3)
    ok, res = is_killing(sf.metric(), field, u)
    assert ok, res


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_killing_fields_have_antisymmetric_derivative(seed):
    rng = np.random.default_rng(seed)
    field = euclidean_killing(rng, 4)
    upper, lower = covariant_deriv_w(euclidean_metric(4), field, rng.normal(size=4))
    np.testing.assert_allclose(lower, -lower.T, atol=1e-14)
    assert norm_sq(euclidean_metric(4), field, np.zeros(4)) >= 0
