"""Hardy and weighted Bergman norms of ``funcrep`` functions.

All volumes are normalized (v(B_n) = 1); for alpha <= -1 the weight
(1-|z|^2)^alpha is taken against that normalized volume as well, so readers
comparing with raw Lebesgue measure will see a factor (pi^n/n!)^(1/p) on the
seminorm part.

Kernel combinations in n >= 2 variables are integrated through their disc
profile (see ``zonal_profile``) unless ``cfg.zonal`` is off; everything else
uses the full quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln

from .funcrep import (
    HoloFunction,
    HoloSum,
    KernelCombo,
    MultiIndex,
    _eval,
    evaluate,
    radial_derivative_power,
)
from .integrate import IntegralResult, QuadConfig, QuadratureError, ball_integral, normalization_constant, sphere_integral
from .params import Bergman, Hardy, LogarithmicGrowth, SpaceSpec, growth_envelope

MONOTONE_RADII = (0.2, 0.4, 0.6, 0.8, 1.0)
_MONOTONE_SLACK = 1e-8


class ConsistencyError(RuntimeError):
    """Integral means failed to increase with r, which signals a quadrature bug."""


class UnsupportedNorm(ValueError):
    pass


def pole_hint(f: HoloFunction) -> Optional[np.ndarray]:
    """Pole of the most singular kernel part of ``f``, if any."""
    if isinstance(f, KernelCombo):
        return f.a
    if isinstance(f, HoloSum):
        kernels = [g for g in f.parts if isinstance(g, KernelCombo)]
        if kernels:
            return max(kernels, key=lambda g: g.pole_norm).a
    return None


def zonal_profile(f: HoloFunction, cfg: QuadConfig = QuadConfig()) -> Optional[KernelCombo]:
    """Disc profile g of a kernel combination f in n >= 2 variables.

    f depends on z only through <z,a> = |a| <z,u>, so f(z) = g(<z,u>) with
    g(w) = f evaluated on the disc at pole |a|.  Under z -> <z,u> the measure
    dv_alpha on B_n pushes forward to dv_(alpha+n-1) on the disc and sigma
    on S^n to dv_(n-2), which turns every norm of f into a disc integral.
    """
    if cfg.zonal and isinstance(f, KernelCombo) and f.n >= 2 and f.pole_norm > 0:
        return KernelCombo(1, np.array([f.pole_norm]), f.s, f.terms, f.prefactor)
    return None


def _power(f: HoloFunction, p: float, scale: float = 1.0):
    if scale == 1.0:
        return lambda z: np.abs(_eval(f, z)) ** p
    return lambda z: np.abs(_eval(f, scale * z)) ** p


def _checked(res: IntegralResult, what: str) -> float:
    if not res.converged:
        raise QuadratureError(what, res)
    return max(res.real, 0.0)


def _positive(p) -> float:
    if not p > 0:
        raise UnsupportedNorm(f"exponent p must be positive, got {p}")
    return float(p)


@dataclass(frozen=True)
class NormResult:
    """A norm with the quadrature diagnostics behind it.

    ``rel_error`` is the relative size of the last refinement step, carried
    through the p-th root; it is an error estimate, not a bound.
    """

    value: float
    converged: bool
    rel_error: float
    nodes_used: int


def _root(res: IntegralResult, p: float, divide: float = 1.0, offset: float = 0.0) -> NormResult:
    v = max(res.real, 0.0) / divide
    d = (res.delta or 0.0) / divide
    root = v ** (1.0 / p)
    rel = d / (p * v) if v > 0 else (0.0 if d == 0 else math.inf)
    total = offset + root
    rel = rel * root / total if total > 0 else rel
    return NormResult(total, res.converged, rel, res.nodes_used)


def integral_mean_result(f: HoloFunction, p: float, r: float, cfg: QuadConfig = QuadConfig()) -> NormResult:
    """M_p(r, f) = [int |f(r zeta)|^p dsigma]^(1/p)."""
    p = _positive(p)
    g = zonal_profile(f, cfg)
    if g is not None:
        return _root(ball_integral(_power(g, p, r), 1, f.n - 2.0, cfg, pole=r * g.a), p)
    a = pole_hint(f)
    res = sphere_integral(_power(f, p, r), f.n, cfg, pole=None if a is None else r * a)
    return _root(res, p)


def integral_mean(f: HoloFunction, p: float, r: float, cfg: QuadConfig = QuadConfig()) -> float:
    res = integral_mean_result(f, p, r, cfg)
    if not res.converged:
        raise QuadratureError(f"M_{p}({r})", IntegralResult(res.value, None, res.nodes_used, False))
    return res.value


def _check_dim(f: HoloFunction, n: int) -> None:
    if f.n != n:
        raise ValueError(f"function lives in C^{f.n}, not C^{n}")


def hardy_norm_result(f: HoloFunction, p, n: int, cfg: QuadConfig = QuadConfig(), check_monotone: bool = True) -> NormResult:
    _check_dim(f, n)
    p = _positive(p)
    radii = MONOTONE_RADII if check_monotone else (1.0,)
    means = [integral_mean_result(f, p, r, cfg) for r in radii]
    for lo, hi in zip(means, means[1:]):
        slack = _MONOTONE_SLACK + 4.0 * (lo.rel_error + hi.rel_error)
        if lo.value > hi.value * (1.0 + slack) + 1e-300:
            raise ConsistencyError(f"integral means decrease: {[m.value for m in means]}")
    return means[-1]


def hardy_norm(f: HoloFunction, p, n: int, cfg: QuadConfig = QuadConfig(), check_monotone: bool = True) -> float:
    """||f||_{H^p}, evaluated on the sphere itself.

    Both representations extend continuously to the closed ball, so the sup
    over r of the integral means is their value at r = 1.  As a runtime
    self-check the means are required to be nondecreasing on MONOTONE_RADII.
    """
    return _strict(hardy_norm_result(f, p, n, cfg, check_monotone), f"H^{p}")


def derivative_order(p, alpha) -> int:
    """Smallest positive integer N with N p + alpha > -1."""
    if isinstance(p, Rational) and isinstance(alpha, Rational):
        N = math.floor(Fraction(-1 - alpha) / Fraction(p)) + 1
    else:
        N = math.floor((-1.0 - float(alpha)) / float(p)) + 1
    return max(1, N)


def bergman_norm_result(f: HoloFunction, p, alpha, n: int, cfg: QuadConfig = QuadConfig()) -> NormResult:
    _check_dim(f, n)
    pf = _positive(p)
    h, dim, shift = f, n, 0.0
    z = zonal_profile(f, cfg)
    if z is not None:
        h, dim, shift = z, 1, n - 1.0
    a = pole_hint(h)
    if alpha > -1:
        return _root(ball_integral(_power(h, pf), dim, float(alpha) + shift, cfg, pole=a), pf)
    N = derivative_order(p, alpha)
    gamma = float(N * p + alpha)
    g = radial_derivative_power(h, N)
    res = ball_integral(_power(g, pf), dim, gamma + shift, cfg, pole=a)
    f0 = float(abs(evaluate(f, np.zeros(n))))
    return _root(res, pf, normalization_constant(n, gamma), f0)


def bergman_norm(f: HoloFunction, p, alpha, n: int, cfg: QuadConfig = QuadConfig()) -> float:
    """||f||_{p,alpha} for any real alpha.

    alpha > -1: [int |f|^p dv_alpha]^(1/p) with dv_alpha a probability measure.
    alpha <= -1: |f(0)| + [int |(1-|z|^2)^N R^N f|^p (1-|z|^2)^alpha dv]^(1/p)
    with N the smallest positive integer making N p + alpha > -1; the combined
    weight is integrated as c_gamma^(-1) dv_gamma with gamma = N p + alpha.
    """
    return _strict(bergman_norm_result(f, p, alpha, n, cfg), f"A^{p}_{alpha}")


def _strict(res: NormResult, what: str) -> float:
    if not res.converged:
        raise QuadratureError(what, IntegralResult(res.value, None, res.nodes_used, False))
    return res.value


def norm_result(f: HoloFunction, space: SpaceSpec, n: int, cfg: QuadConfig = QuadConfig(), check_monotone: bool = True) -> NormResult:
    if isinstance(space, Hardy):
        return hardy_norm_result(f, space.p, n, cfg, check_monotone)
    return bergman_norm_result(f, space.p, space.alpha, n, cfg)


def norm(f: HoloFunction, space: SpaceSpec, n: int, cfg: QuadConfig = QuadConfig()) -> float:
    return _strict(norm_result(f, space, n, cfg), str(space))


def monomial_norm_closed(m: MultiIndex, space: SpaceSpec, n: int) -> float:
    """Closed-form p = 2 norm of z^m in H^2 or A^2_alpha (alpha > -1)."""
    m = tuple(int(k) for k in m)
    if len(m) != n:
        raise ValueError(f"multi-index {m} does not have length {n}")
    if abs(float(space.p) - 2.0) > 1e-12:
        raise UnsupportedNorm("closed form only for p = 2")
    lm = sum(math.lgamma(k + 1) for k in m)
    d = sum(m)
    if isinstance(space, Hardy):
        return math.exp(0.5 * (math.lgamma(n) + lm - math.lgamma(n + d)))
    al = float(space.alpha)
    if not al > -1:
        raise UnsupportedNorm("closed form only for alpha > -1")
    return math.exp(0.5 * (lm + gammaln(n + 1 + al) - gammaln(n + 1 + d + al)))


def forelli_rudin_result(z, alpha, t, n: int, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """int |1 - <z,w>|^(-(n+1+alpha+t)) dv_alpha(w), dv_alpha normalized.

    The integrand depends on w only through <w, zeta> with zeta = z/|z|, and
    the pushforward of dv_alpha under w -> <w, zeta> is dv_(alpha+n-1) on the
    disc, so the integral is computed on the disc.
    """
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (n,):
        raise ValueError(f"z must lie in C^{n}")
    if not alpha > -1:
        raise UnsupportedNorm("Forelli-Rudin integral needs alpha > -1")
    rho = float(np.linalg.norm(z))
    if rho >= 1:
        raise ValueError("|z| must be < 1")
    c = float(n + 1 + alpha + t)
    if rho == 0.0:
        return IntegralResult(1.0, None, 1, True)

    def h(w):
        return np.abs(1.0 - rho * w[..., 0]) ** (-c)

    return ball_integral(h, 1, float(alpha) + n - 1, cfg, pole=np.array([rho]))


def forelli_rudin(z, alpha, t, n: int, cfg: QuadConfig = QuadConfig()) -> float:
    res = forelli_rudin_result(z, alpha, t, n, cfg)
    return _checked(res, f"Forelli-Rudin(alpha={alpha}, t={t})")


class UnsupportedEnvelope(ValueError):
    pass


def growth_ratio(
    f: HoloFunction,
    space: SpaceSpec,
    n: int,
    grid: Sequence[float],
    cfg: QuadConfig = QuadConfig(),
    directions: int = 8,
    f_norm: Optional[float] = None,
) -> float:
    """max |f(z)| (1-|z|^2)^e / ||f|| over z = r u, r in grid.

    The directions u are the pole direction of f (or e_1) plus ``directions``
    random unit vectors drawn from ``cfg.seed``.
    """
    env = growth_envelope(space, n)
    if isinstance(env, LogarithmicGrowth):
        raise UnsupportedEnvelope(f"{space} has logarithmic growth")
    e = float(env.exponent)
    if f_norm is None:
        f_norm = norm(f, space, n, cfg)
    if not f_norm > 0:
        raise ValueError("growth ratio needs a nonzero function")
    a = pole_hint(f)
    first = np.eye(n, dtype=complex)[0] if a is None or not np.any(a) else a / np.linalg.norm(a)
    rng = np.random.default_rng(cfg.seed)
    g = rng.standard_normal((directions, n)) + 1j * rng.standard_normal((directions, n))
    u = np.vstack([first[None, :], g / np.linalg.norm(g, axis=1)[:, None]])
    r = np.asarray(grid, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise ValueError("grid radii must lie in [0, 1)")
    pts = r[:, None, None] * u[None, :, :]
    vals = np.abs(_eval(f, pts)) * ((1.0 - r**2) ** e)[:, None]
    return float(vals.max() / f_norm)
