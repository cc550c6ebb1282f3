import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from hardyberg.funcrep import KernelCombo, TaylorPolynomial, all_indices_up_to, random_polynomial
from hardyberg.integrate import QuadConfig, QuadratureError, normalization_constant
from hardyberg.norms import (
    UnsupportedEnvelope,
    UnsupportedNorm,
    bergman_norm,
    bergman_norm_result,
    derivative_order,
    growth_ratio,
    hardy_norm,
    integral_mean,
    monomial_norm_closed,
    norm,
    zonal_profile,
)
from hardyberg.params import Bergman, Hardy


def unit_kernel(a, exponent):
    """f_a = (1-|a|^2)^e (1-<z,a>)^(-2e)."""
    a = np.asarray(a, dtype=complex)
    return KernelCombo.power(a, 2 * exponent, (1 - np.vdot(a, a).real) ** exponent)


def direction(n, r):
    u = np.arange(1, n + 1) * np.exp(1j * np.arange(n))
    return r * u / np.linalg.norm(u)


@pytest.mark.parametrize("p", [0.5, 1, 2, 3.5])
@pytest.mark.parametrize("alpha", [0.0, 1.5, -1.0, -2.5])
def test_constant_norms(p, alpha):
    f = TaylorPolynomial.constant(2, 3 - 4j)
    assert hardy_norm(f, p, 2) == pytest.approx(5.0, rel=1e-12)
    assert bergman_norm(f, p, alpha, 2) == pytest.approx(5.0, rel=1e-12)


def test_spec_examples():
    z = TaylorPolynomial.monomial((1,))
    assert bergman_norm(z, 2, 0, 1) == pytest.approx(math.sqrt(0.5), rel=1e-10)
    # N = 1: [int (1-r^2)^2 r^2 (1-r^2)^(-1) 2r dr]^(1/2) = [2 (1/4 - 1/6)]^(1/2)
    assert bergman_norm(z, 2, -1, 1) == pytest.approx(math.sqrt(1 / 6), rel=1e-10)
    assert hardy_norm(TaylorPolynomial.monomial((1, 1)), 2, 2) == pytest.approx(math.sqrt(1 / 6), rel=1e-10)
    assert monomial_norm_closed((2, 0), Hardy(2), 2) == pytest.approx(math.sqrt(1 / 3))
    assert monomial_norm_closed((0,), Bergman(2, 0), 1) == 1.0


def test_derivative_order():
    assert derivative_order(2, -1) == 1
    assert derivative_order(Fraction(1, 2), Fraction(-3, 2)) == 2
    assert derivative_order(1, -2) == 2
    assert derivative_order(1, -0.5) == 1
    assert derivative_order(0.5, -3.2) == 5


@pytest.mark.parametrize("n", [1, 2])
def test_monomials_match_closed_form(n):
    # degrees up to 6 in both dimensions run in the acceptance suite
    for m in all_indices_up_to(n, 3):
        f = TaylorPolynomial.monomial(m)
        assert hardy_norm(f, 2, n) == pytest.approx(monomial_norm_closed(m, Hardy(2), n), rel=1e-10)
        for alpha in (0.0, 1.5):
            exact = monomial_norm_closed(m, Bergman(2, alpha), n)
            assert bergman_norm(f, 2, alpha, n) == pytest.approx(exact, rel=1e-6)


def test_closed_form_rejects():
    with pytest.raises(UnsupportedNorm):
        monomial_norm_closed((1,), Hardy(3), 1)
    with pytest.raises(UnsupportedNorm):
        monomial_norm_closed((1,), Bergman(2, -1), 1)


@pytest.mark.parametrize("n,seed", [(1, 3), (2, 4)])
def test_hardy_two_is_coefficient_sum(n, seed):
    f = random_polynomial(n, 5, seed)
    exact = math.sqrt(sum(abs(c) ** 2 * monomial_norm_closed(m, Hardy(2), n) ** 2 for m, c in f.coeffs.items()))
    assert hardy_norm(f, 2, n) == pytest.approx(exact, rel=1e-10)


def test_bergman_two_below_minus_one_is_coefficient_sum():
    # N = 1, gamma = 2N + alpha: ||f|| = |f(0)| + [sum |m|^2 |c_m|^2 ||z^m||^2_{2,gamma} / c_gamma]^(1/2)
    n, alpha = 2, -1.5
    f = random_polynomial(n, 4, 8)
    gamma = 2 + alpha
    semi = sum(
        sum(m) ** 2 * abs(c) ** 2 * monomial_norm_closed(m, Bergman(2, gamma), n) ** 2 for m, c in f.coeffs.items()
    )
    exact = abs(f.coeffs[(0, 0)]) + math.sqrt(semi / normalization_constant(n, gamma))
    assert bergman_norm(f, 2, alpha, n) == pytest.approx(exact, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("p", [1, 2, 3.5])
@pytest.mark.parametrize("r", [0.0, 0.5, 0.9])
def test_unit_kernel_family_hardy(n, p, r):
    f = unit_kernel(direction(n, r), n / p)
    assert hardy_norm(f, p, n) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("n,p,alpha", [(1, 2, 0.0), (1, 1, 1.0), (2, 3, 0.5), (2, 2, -0.5)])
def test_unit_kernel_family_bergman(n, p, alpha):
    f = unit_kernel(direction(n, 0.9), (n + 1 + alpha) / p)
    assert bergman_norm(f, p, alpha, n) == pytest.approx(1.0, rel=1e-8)


def test_scaling_is_exact():
    f = KernelCombo.power(direction(2, 0.7), 1.3)
    c = -2 + 1j
    for space in (Hardy(1.5), Bergman(2, 0.5), Bergman(1, -2)):
        assert norm(c * f, space, 2) == pytest.approx(abs(c) * norm(f, space, 2), rel=1e-12)


@pytest.mark.parametrize("n,alpha", [(2, 0.5), (2, -1.5)])
def test_disc_profile_matches_full_quadrature(n, alpha):
    f = KernelCombo(n, direction(n, 0.7), 1.2, ((0, 1.0), (1, 0.5j)))
    assert zonal_profile(f) is not None
    full = replace(QuadConfig(), zonal=False)
    for p in (2.0, 3.0):
        disc = bergman_norm_result(f, p, alpha, n)
        ref = bergman_norm_result(f, p, alpha, n, full)
        assert disc.converged and ref.converged
        assert disc.value == pytest.approx(ref.value, rel=1e-8)
    assert hardy_norm(f, 2, n) == pytest.approx(hardy_norm(f, 2, n, full), rel=1e-8)


def test_no_disc_profile_without_pole_or_flag():
    assert zonal_profile(KernelCombo.power(np.zeros(2), 1.0)) is None
    assert zonal_profile(KernelCombo.power([0.5], 1.0)) is None
    assert zonal_profile(KernelCombo.power([0.5, 0], 1.0), replace(QuadConfig(), zonal=False)) is None


def test_norm_monotone_in_alpha():
    f = KernelCombo.power(direction(2, 0.95), 2.5)
    vals = [bergman_norm(f, 2, a, 2) for a in (0.0, 0.5, 1.0, 2.0)]
    assert all(math.isfinite(v) for v in vals)
    # integral means increase in r and dv_alpha moves mass inward as alpha grows
    assert vals == sorted(vals, reverse=True)


def test_integral_means_nondecreasing():
    f = random_polynomial(2, 3, 11)
    means = [integral_mean(f, 2.0, r) for r in (0.1, 0.5, 0.9, 1.0)]
    assert means == sorted(means)


def test_nonconvergence_raises():
    f = KernelCombo.power(direction(2, 0.99), 4.0)
    cfg = replace(QuadConfig(), zonal=False, max_refine=0)
    with pytest.raises(QuadratureError):
        hardy_norm(f, 2, 2, cfg)


def test_bad_inputs():
    f = TaylorPolynomial.constant(1)
    with pytest.raises(UnsupportedNorm):
        hardy_norm(f, 0, 1)
    with pytest.raises(ValueError):
        hardy_norm(f, 2, 2)


def test_growth_ratio_examples():
    f = TaylorPolynomial.constant(2)
    assert growth_ratio(f, Hardy(2), 2, [0.0, 0.5, 0.9]) == pytest.approx(1.0)
    a = direction(2, 0.95)
    fa = unit_kernel(a, 2 / 2)
    grid = np.linspace(0, 0.99, 100)
    assert growth_ratio(fa, Hardy(2), 2, grid) <= 1 + 1e-6
    assert growth_ratio(fa, Hardy(2), 2, [0.95]) >= 0.99
    with pytest.raises(UnsupportedEnvelope):
        growth_ratio(f, Bergman(1, -3), 1, grid)
