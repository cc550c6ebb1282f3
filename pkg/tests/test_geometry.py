import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hardyberg.geometry import (
    BoundaryPoint,
    CarlesonSpec,
    Finite,
    Form,
    Infinity,
    RadialWeight,
    WeightedSamples,
    admissible_curve,
    admissible_integral,
    area_function,
    area_order,
    bergman_distance,
    carleson_g,
    carleson_weight,
    in_admissible_region,
    in_dr_region,
    metric_ball_measure,
    metric_ball_volume_result,
    mobius,
    pseudo_distance,
    region_volume,
    unitary_from,
)
from hardyberg.integrate import QuadConfig, region_integral_mc


def ball_point(seed, n, rmax=0.95):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return rmax * rng.uniform() ** 0.5 * z / np.linalg.norm(z)


def metric_ball_volume_exact(z, n, R):
    """v(D(z,r)) = R^(2n) ((1-|z|^2) / (1-R^2|z|^2))^(n+1), R = tanh r."""
    zz = float(np.vdot(z, z).real)
    return R ** (2 * n) * ((1 - zz) / (1 - R * R * zz)) ** (n + 1)


seeds = st.integers(0, 2**31)
dims = st.integers(1, 3)


@given(seeds, dims)
def test_mobius_involution(seed, n):
    a, z = ball_point(seed, n), ball_point(seed + 1, n)
    assert np.allclose(mobius(a, mobius(a, z)), z, atol=1e-10)
    assert np.allclose(mobius(a, np.zeros(n)), a)
    assert np.allclose(mobius(a, a), 0, atol=1e-12)


@given(seeds, dims)
def test_mobius_identity(seed, n):
    a, z = ball_point(seed, n), ball_point(seed + 1, n)
    lhs = 1 - np.linalg.norm(mobius(a, z)) ** 2
    rhs = (1 - np.vdot(a, a).real) * (1 - np.vdot(z, z).real) / abs(1 - np.vdot(a, z)) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-9)


@given(seeds, dims)
def test_bergman_distance_is_invariant_metric(seed, n):
    z, w, x = (ball_point(seed + k, n) for k in range(3))
    v = ball_point(seed + 3, n)
    U = unitary_from(v / np.linalg.norm(v))
    d = bergman_distance(z, w, n)
    assert d == pytest.approx(bergman_distance(w, z, n), rel=1e-9, abs=1e-12)
    assert d == pytest.approx(bergman_distance(U @ z, U @ w, n), rel=1e-9, abs=1e-12)
    assert d <= bergman_distance(z, x, n) + bergman_distance(x, w, n) + 1e-9
    a = ball_point(seed + 4, n)
    assert d == pytest.approx(bergman_distance(mobius(a, z), mobius(a, w), n), rel=1e-7, abs=1e-9)


def test_unitary_from_maps_e1():
    zeta = np.array([0.6j, 0.0, 0.8])
    U = unitary_from(zeta)
    assert np.allclose(U.conj().T @ U, np.eye(3))
    assert np.allclose(U[:, 0], zeta)


def test_boundary_point_validation():
    assert BoundaryPoint.axis(3, 1).n == 3
    with pytest.raises(ValueError):
        BoundaryPoint(np.array([0.5, 0.5]))


def test_pseudo_distance_vectorized():
    z = np.array([0.3, 0.1j])
    ws = np.stack([ball_point(k, 2) for k in range(5)])
    d = pseudo_distance(z, ws)
    assert d.shape == (5,)
    assert d[2] == pytest.approx(np.linalg.norm(mobius(z, ws[2])))


@pytest.mark.parametrize("n,r", [(1, 0.0), (1, 0.9), (2, 0.5), (2, 0.95), (3, 0.8)])
def test_metric_ball_volume_mc(n, r):
    z = np.zeros(n, dtype=complex)
    z[0] = r
    res = metric_ball_volume_result(z, n, QuadConfig(mc_samples=200_000, seed=5))
    exact = metric_ball_volume_exact(z, n, math.tanh(1.0))
    # in the disc the sampling box is the metric disc itself, hence exact
    assert abs(res.value - exact) < 5 * res.stderr + 1e-14
    assert res.stderr < 0.02 * exact


@pytest.mark.parametrize("n,r", [(1, 0.9), (2, 0.7)])
def test_metric_ball_measure_unweighted(n, r):
    z = r * np.eye(n, dtype=complex)[-1]
    exact = metric_ball_volume_exact(z, n, math.tanh(1.0))
    assert metric_ball_measure(z, n, 0.0) == pytest.approx(exact, rel=1e-8)


@pytest.mark.parametrize("n,beta", [(1, 0.5), (2, -0.5)])
def test_metric_ball_measure_weighted_against_sampling(n, beta):
    z = ball_point(7, n, 0.8)
    R = math.tanh(1.0)
    cfg = QuadConfig(mc_samples=400_000, seed=9)
    res = region_integral_mc(lambda w: np.ones(len(w)), lambda w: pseudo_distance(z, w) < R, n, beta, cfg)
    assert abs(metric_ball_measure(z, n, beta) - res.real) < 5 * res.stderr


def test_admissible_region_chain():
    rng = np.random.default_rng(0)
    zeta = np.array([0.6, 0.8j])
    z = np.stack([ball_point(int(s), 2, 0.999) for s in rng.integers(0, 2**31, 4000)])
    inside = in_admissible_region(z, zeta)
    assert inside.any() and not inside.all()
    zi = z[inside]
    k = np.abs(1 - zi @ np.conj(zeta))
    rr = np.linalg.norm(zi, axis=1)
    assert np.all(k < 1 - rr**2)
    assert np.all(k >= 1 - rr - 1e-12)
    assert bool(in_admissible_region(0.5 * zeta, BoundaryPoint(zeta)))
    assert not bool(in_admissible_region(np.zeros(2), zeta))


def test_dr_region():
    assert bool(in_dr_region(0.99, 0.5))
    assert not bool(in_dr_region(0.0, 0.5))
    assert not bool(in_dr_region(1.5, 0.5))
    with pytest.raises(ValueError):
        in_dr_region(0.5, 1.0)


def test_region_volume_against_sampling():
    exact = region_volume(1)
    assert region_volume(2) is None
    cfg = QuadConfig(mc_samples=400_000, seed=3)
    res = region_integral_mc(lambda z: np.ones(len(z)), lambda z: in_admissible_region(z, np.array([1.0])), 1, 0.0, cfg)
    assert abs(res.real - exact) < 5 * res.stderr
    # t = -(n+1) makes both weights identically one
    near = admissible_integral(-2.0, BoundaryPoint.axis(1), 1e-3, Form.KERNEL_POWER, 1, cfg)
    assert abs(near.value - exact) < 5 * near.stderr + 1e-5


@pytest.mark.parametrize("form", list(Form))
def test_admissible_curve_monotone(form):
    eps = [2.0**-k for k in range(2, 9)]
    curve = admissible_curve(-0.5, BoundaryPoint.axis(2), eps, form, 2, QuadConfig(mc_samples=100_000))
    vals = [r.value for r in curve]
    assert vals == sorted(vals)
    assert all(r.converged for r in curve)


def test_carleson_spec():
    spec = CarlesonSpec.for_space(2, 1, -1.5)
    assert (spec.m, spec.measure.beta) == (1, -0.5)
    assert CarlesonSpec.for_space(3, 0.5, -2.2).m == 3
    with pytest.raises(ValueError):
        CarlesonSpec(RadialWeight(0.0), 2, 1, 1)
    with pytest.raises(ValueError):
        RadialWeight(-1.0)
    with pytest.raises(ValueError):
        WeightedSamples(np.zeros((2, 1)), np.array([1.0]))


def test_carleson_g_radial_weight():
    # mu = dv with q m = 1: g(z) = v(D(z,1)) / (1-|z|^2)^(1+n)
    n = 2
    spec = CarlesonSpec(RadialWeight(0.0), 1.0, 1, 2.0)
    z = np.array([0.3, 0.5j])
    exact = metric_ball_volume_exact(z, n, math.tanh(1.0)) / (1 - np.vdot(z, z).real) ** (1 + n)
    assert carleson_g(spec, z, n) == pytest.approx(exact, rel=1e-8)


def test_carleson_g_point_masses():
    pts = np.array([[0.0], [0.5], [0.99]])
    spec = CarlesonSpec(WeightedSamples(pts, np.array([1.0, 2.0, 4.0])), 1.0, 1, 2.0)
    # D(0,1) is |w| < tanh 1 ~ 0.76
    assert carleson_g(spec, np.array([0.0]), 1) == pytest.approx(3.0)


def test_area_order():
    assert area_order(1.0) == Finite(2.0)
    assert area_order(0.5).r == pytest.approx(4 / 3)
    assert area_order(2.0) is Infinity


def test_area_function_matches_admissible_integral():
    # A_r g with g = (1-|z|^2)^(1+alpha) is the invariant-power integral with t = -r(1+alpha)
    n, alpha, r, eps = 2, 0.0, 2.0, 2.0**-8
    cfg = QuadConfig(mc_samples=100_000, seed=4)
    zeta = BoundaryPoint.axis(n)
    a = area_function(carleson_weight(alpha), zeta, Finite(r), eps, n, cfg)
    b = admissible_integral(-r * (1 + alpha), zeta, eps, Form.INVARIANT_POWER, n, cfg).value
    assert a == pytest.approx(b ** (1 / r), rel=1e-12)


def test_area_function_sup():
    zeta = BoundaryPoint.axis(2)
    v = area_function(carleson_weight(0.5), zeta, Infinity, 0.01, 2, QuadConfig(mc_samples=10_000))
    assert v == pytest.approx(1.0, abs=1e-6)
