import math

import mpmath
import numpy as np
import pytest
from scipy.special import gammaln

from hardyberg.integrate import (
    DivergentWeight,
    QuadConfig,
    ball_integral,
    graded_radial_rule,
    mc_generators,
    normalization_constant,
    radial_depth,
    radial_rule,
    region_integral_mc,
    sample_ball,
    sphere_integral,
    sphere_rule,
    uniform_sphere,
)
from hardyberg.norms import forelli_rudin, forelli_rudin_result


# The default node counts favour kernel peaks in n <= 2; on S^5 smooth
# integrands need more hyperspherical nodes and fewer trapezoid nodes.
N3 = QuadConfig(angular_nodes=8, simplex_nodes=32)


def cfg_for(n):
    return N3 if n == 3 else QuadConfig()


def sphere_moment(m):
    """int |zeta^m|^2 dsigma = (n-1)! m! / (n-1+|m|)!"""
    n = len(m)
    return math.exp(math.lgamma(n) + sum(math.lgamma(k + 1) for k in m) - math.lgamma(n + sum(m)))


def beta_moment(n, alpha, k):
    """int |z|^(2k) dv_alpha = B(n+k, alpha+1) / B(n, alpha+1)."""
    return math.exp(gammaln(n + k) - gammaln(n + k + alpha + 1) - gammaln(n) + gammaln(n + alpha + 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_rule_is_probability(n):
    nodes, w = sphere_rule(n, 8, 6)
    assert np.isclose(w.sum(), 1.0, atol=1e-14)
    assert np.allclose(np.linalg.norm(nodes, axis=1), 1.0, atol=1e-14)


@pytest.mark.parametrize("m", [(3,), (1, 2), (0, 4), (2, 1, 1), (0, 0, 3)])
def test_sphere_monomial_moments(m):
    n = len(m)
    res = sphere_integral(lambda z: np.abs(np.prod(z ** np.array(m), axis=-1)) ** 2, n, cfg_for(n))
    assert res.converged
    assert res.real == pytest.approx(sphere_moment(m), rel=1e-10)


@pytest.mark.parametrize("n,alpha", [(1, 0.0), (1, -0.5), (2, 1.5), (3, 0.0), (2, -0.9)])
def test_ball_radial_moments(n, alpha):
    for k in (0, 1, 3):
        res = ball_integral(lambda z: np.sum(np.abs(z) ** 2, axis=-1) ** k, n, alpha, cfg_for(n))
        assert res.converged
        assert res.real == pytest.approx(beta_moment(n, alpha, k), rel=1e-10)


@pytest.mark.parametrize("n,alpha,depth", [(1, 0.0, 3), (2, 1.0, 6), (3, -0.5, 10)])
def test_graded_rule_matches_plain(n, alpha, depth):
    u, w = graded_radial_rule(n, alpha, 16, depth)
    v, wv = radial_rule(n, alpha, 16)
    for k in range(6):
        assert np.dot(w, u**k) == pytest.approx(np.dot(wv, v**k), rel=1e-12)


def test_radial_depth():
    assert radial_depth(0.0) == 0
    assert radial_depth(0.9) == math.ceil(math.log2(1 / 0.19))


@pytest.mark.parametrize("n,alpha", [(1, 0.0), (2, 0.5), (3, -0.5), (4, 2.0)])
def test_normalization_constant_against_mpmath(n, alpha):
    with mpmath.workdps(40):
        raw = mpmath.quad(lambda u: n * u ** (n - 1) * (1 - u) ** alpha, [0, 1])
    assert normalization_constant(n, alpha) == pytest.approx(float(1 / raw), rel=1e-12)


def test_divergent_weight():
    with pytest.raises(DivergentWeight):
        normalization_constant(1, -1.0)
    with pytest.raises(DivergentWeight):
        ball_integral(lambda z: 1.0 + 0 * z[..., 0], 1, -1.0)


def test_quadconfig_validation():
    with pytest.raises(ValueError):
        QuadConfig(angular_nodes=2)
    with pytest.raises(ValueError):
        QuadConfig(mc_samples=10)
    with pytest.raises(ValueError):
        QuadConfig(rel_tol=0)
    c = QuadConfig()
    assert c.refined(1).angular_nodes == 2 * c.angular_nodes
    assert c.refined(-1).radial_nodes == c.radial_nodes // 2
    assert c.for_pole(0.99).angular_nodes == 16 * c.angular_nodes


def fr_closed(rho, n, alpha, t):
    """2F1(c, c; n+1+alpha; rho^2), c = (n+1+alpha+t)/2, from the power series of the kernel."""
    c = (n + 1 + alpha + t) / 2
    return float(mpmath.hyp2f1(c, c, n + 1 + alpha, rho**2))


@pytest.mark.parametrize(
    "n,alpha,t,rho",
    [(1, 0.0, 1.0, 0.9), (1, 0.0, -0.5, 0.99), (2, 1.0, 0.0, 0.95), (2, -0.5, 0.5, 0.9), (3, 0.0, 2.0, 0.7), (1, 2.0, -1.0, 0.99)],
)
def test_forelli_rudin_hypergeometric(n, alpha, t, rho):
    z = np.zeros(n, dtype=complex)
    z[-1] = rho
    assert forelli_rudin(z, alpha, t, n) == pytest.approx(fr_closed(rho, n, alpha, t), rel=1e-8)


def test_forelli_rudin_origin():
    assert forelli_rudin(np.zeros(2), 0.5, 3.0, 2) == 1.0


@pytest.mark.parametrize("rho", [0.5, 0.8, 0.9])
def test_disc_reduction_matches_full_ball(rho):
    n, alpha, t = 2, 0.5, 0.5
    z = rho * np.array([0.6, 0.8j])
    s = n + 1 + alpha + t
    full = ball_integral(lambda w: np.abs(1 - w @ np.conj(z)) ** (-s), n, alpha, pole=z)
    assert full.converged
    assert full.real == pytest.approx(forelli_rudin_result(z, alpha, t, n).real, rel=1e-9)


@pytest.mark.parametrize("n,r", [(1, 0.9), (2, 0.8)])
def test_reproducing_identity(n, r):
    # int |1-<z,a>|^(-2(n+1)) dv(z) = (1-|a|^2)^(-(n+1))
    a = np.zeros(n, dtype=complex)
    a[0] = r
    res = ball_integral(lambda z: np.abs(1 - z @ np.conj(a)) ** (-2 * (n + 1)), n, 0.0, pole=a)
    assert res.real == pytest.approx((1 - r * r) ** (-(n + 1)), rel=1e-8)


def test_unconverged_is_reported():
    cfg = QuadConfig(max_refine=0, rel_tol=1e-14)
    a = np.array([0.3, 0.95])
    res = sphere_integral(lambda z: np.abs(1 - z @ a) ** -6, 2, cfg, pole=a)
    assert not res.converged
    assert res.delta is not None and res.delta > 0


def test_mc_streams_reproducible():
    a = [rng.standard_normal(3) for rng, _ in mc_generators(4, 200_000)]
    b = [rng.standard_normal(3) for rng, _ in mc_generators(4, 200_000)]
    assert len(a) == 4
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    sizes = [size for _, size in mc_generators(4, 200_000)]
    assert sum(sizes) == 200_000


def test_ball_samples_have_right_moment():
    rng = np.random.default_rng(0)
    z = sample_ball(rng, 200_000, 3, 1.0)
    r2 = np.sum(np.abs(z) ** 2, axis=1)
    assert r2.max() < 1
    assert r2.mean() == pytest.approx(beta_moment(3, 1.0, 1), abs=5 * r2.std() / math.sqrt(len(r2)))
    assert np.allclose(np.linalg.norm(uniform_sphere(rng, 10, 5), axis=1), 1.0)


@pytest.mark.parametrize("n", [4, 5])
def test_high_dimension_mc_moments(n):
    cfg = QuadConfig(mc_samples=100_000, seed=3)
    res = sphere_integral(lambda z: np.abs(z[..., 0] * z[..., 1]) ** 2, n, cfg)
    assert abs(res.real - sphere_moment((1, 1) + (0,) * (n - 2))) < 5 * res.stderr
    res = ball_integral(lambda z: np.sum(np.abs(z) ** 2, axis=-1), n, 0.5, cfg)
    assert abs(res.real - beta_moment(n, 0.5, 1)) < 5 * res.stderr
    again = ball_integral(lambda z: np.sum(np.abs(z) ** 2, axis=-1), n, 0.5, cfg)
    assert again.value == res.value


def test_region_mc_volume_of_inner_ball():
    # v({|z| < 1/2}) = 2^(-2n) for the normalized volume
    cfg = QuadConfig(mc_samples=200_000, seed=1)
    res = region_integral_mc(lambda z: np.ones(len(z)), lambda z: np.linalg.norm(z, axis=1) < 0.5, 2, 0.0, cfg)
    assert abs(res.real - 1 / 16) < 5 * res.stderr


def test_region_mc_raw_weight():
    # int_{|z|<1/2} (1-|z|^2)^(-2) dv on the disc = int_0^{1/4} (1-u)^(-2) du = 1/3
    cfg = QuadConfig(mc_samples=400_000, seed=2)
    res = region_integral_mc(lambda z: np.ones(len(z)), lambda z: np.abs(z[:, 0]) < 0.5, 1, -2.0, cfg)
    assert abs(res.real - 1 / 3) < 5 * res.stderr
