"""Quadrature and Monte Carlo on the sphere S^n and the ball B_n.

Normalization convention: volume is normalized so that v(B_n) = 1 and sigma is
the rotation-invariant probability measure on the sphere.  For alpha > -1,
``dv_alpha = c_alpha (1 - |z|^2)^alpha dv`` is a probability measure.  Any raw
weight ``(1 - |z|^2)^alpha dv`` with alpha <= -1 is taken against the same
normalized volume, so readers comparing with raw Lebesgue measure will see a
constant factor pi^n / n!.

Deterministic rules (n <= 3):

* sphere: zeta_j = |zeta_j| e^{i theta_j}; trapezoid in each theta_j, and
  Gauss-Legendre in hyperspherical angles for the moduli.  In those angles the
  moduli are smooth, unlike the square roots of simplex coordinates.
* ball: Gauss-Jacobi in u = |z|^2 with weight u^(n-1) (1-u)^alpha, composed
  with the sphere rule.

Integrands peaked near a pole ``a`` (kernel functions) are handled by passing
``pole=a``.  The sphere rule is then pulled back through the involution
phi_b, int h dsigma = int h(phi_b(eta)) P(b, eta) dsigma(eta), with b the
b = a for moderate |a|; this flattens |1 - <z,a>|^(-2n) exactly and leaves a
mild residual for other powers.  Near the sphere b is held back (see
``_centre``) so that the image of the peak and the Jacobian bump both stay
resolvable.  The radial rule is graded geometrically towards |z| = 1 at the
same time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln, roots_jacobi, roots_legendre

from ._ball import mobius_batch, poisson_szego

Integrand = Callable[[np.ndarray], np.ndarray]

MAX_POLE = 0.99
_POLE_CAP = 1.0 - 1e-9
PULL_RADIUS = 0.9
_MC_SHARD = 1 << 16


class DivergentWeight(ValueError):
    pass


class QuadratureError(RuntimeError):
    """An integral did not converge; ``result`` holds the last estimate."""

    def __init__(self, what: str, result: "IntegralResult"):
        super().__init__(f"{what}: quadrature did not converge ({result.nodes_used} nodes, value {result.value!r})")
        self.result = result


@dataclass(frozen=True)
class QuadConfig:
    angular_nodes: int = 32
    simplex_nodes: int = 16
    radial_nodes: int = 24
    mc_samples: int = 200_000
    seed: int = 0
    rel_tol: float = 1e-8
    mc_rel_tol: float = 1e-3
    max_refine: int = 8
    max_points: int = 1 << 25
    zonal: bool = True  # integrate kernel combinations through their disc profile

    def __post_init__(self):
        for name in ("angular_nodes", "simplex_nodes", "radial_nodes"):
            if getattr(self, name) < 4:
                raise ValueError(f"{name} must be at least 4")
        if self.mc_samples < 1000:
            raise ValueError("mc_samples must be at least 1000")
        if not (self.rel_tol > 0 and self.mc_rel_tol > 0):
            raise ValueError("tolerances must be positive")

    def refined(self, k: int = 1) -> "QuadConfig":
        """Node counts scaled by 2^k; k = -1 gives the coarse companion rule."""
        def scale(m):
            return m * 2**k if k >= 0 else max(4, m >> -k)

        return replace(
            self,
            angular_nodes=scale(self.angular_nodes),
            simplex_nodes=scale(self.simplex_nodes),
            radial_nodes=scale(self.radial_nodes),
        )

    def for_pole(self, pole_norm: float) -> "QuadConfig":
        """Angular nodes scaled by (1 - |a|)^(-1/2), rounded up to a power of two."""
        r = min(float(pole_norm), MAX_POLE)
        f = 2 ** max(0, math.ceil(math.log2((1.0 - r) ** -0.5)))
        return replace(self, angular_nodes=self.angular_nodes * f)


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    stderr: Optional[float]
    nodes_used: int
    converged: bool
    delta: Optional[float] = None  # size of the last refinement step (deterministic path)

    @property
    def real(self) -> float:
        return float(np.real(self.value))


# -- rules -------------------------------------------------------------------

@lru_cache(maxsize=64)
def sphere_rule(n: int, angular: int, simplex: int):
    """Nodes (M, n) on S^n and probability weights (M,)."""
    th = 2.0 * np.pi * np.arange(angular) / angular
    circ = np.exp(1j * th)
    if n == 1:
        nodes = circ[:, None]
        w = np.full(angular, 1.0 / angular)
    elif n == 2:
        x, wx = roots_legendre(simplex)
        phi = 0.25 * np.pi * (x + 1.0)
        wphi = 0.25 * np.pi * wx * np.sin(2.0 * phi)
        P, T1, T2 = np.meshgrid(np.arange(simplex), np.arange(angular), np.arange(angular), indexing="ij")
        P, T1, T2 = P.ravel(), T1.ravel(), T2.ravel()
        nodes = np.stack([np.sin(phi[P]) * circ[T1], np.cos(phi[P]) * circ[T2]], axis=-1)
        w = wphi[P] / angular**2
    elif n == 3:
        x, wx = roots_legendre(simplex)
        ang = 0.25 * np.pi * (x + 1.0)
        wang = 0.25 * np.pi * wx
        wphi = 2.0 * wang * np.cos(ang) ** 2 * np.sin(2.0 * ang)
        wpsi = wang * np.sin(2.0 * ang)
        idx = np.meshgrid(*(np.arange(simplex),) * 2, *(np.arange(angular),) * 3, indexing="ij")
        P, S, T1, T2, T3 = (i.ravel() for i in idx)
        nodes = np.stack(
            [
                np.sin(ang[P]) * circ[T1],
                np.cos(ang[P]) * np.sin(ang[S]) * circ[T2],
                np.cos(ang[P]) * np.cos(ang[S]) * circ[T3],
            ],
            axis=-1,
        )
        w = wphi[P] * wpsi[S] / angular**3
    else:
        raise ValueError("deterministic sphere rule only for n <= 3")
    nodes.setflags(write=False)
    w.setflags(write=False)
    return nodes, w


@lru_cache(maxsize=64)
def radial_rule(n: int, alpha: float, m: int):
    """Nodes u in (0,1) and probability weights for u^(n-1) (1-u)^alpha du."""
    x, w = roots_jacobi(m, alpha, n - 1)
    u = 0.5 * (x + 1.0)
    w = w / w.sum()
    return u, w


@lru_cache(maxsize=64)
def graded_radial_rule(n: int, alpha: float, m: int, depth: int):
    """Composite version of ``radial_rule`` refined towards u = 1.

    Breakpoints 1 - 2^-k for k < depth get m Gauss-Legendre nodes each, with
    the weight folded in; the last piece [1 - 2^-depth, 1] uses Gauss-Jacobi.
    """
    x, wx = roots_legendre(m)
    us, ws = [], []
    for k in range(depth):
        lo, hi = 1.0 - 2.0**-k, 1.0 - 2.0 ** -(k + 1)
        u = lo + 0.5 * (hi - lo) * (x + 1.0)
        us.append(u)
        ws.append(0.5 * (hi - lo) * wx * u ** (n - 1) * (1.0 - u) ** alpha)
    d = 2.0**-depth
    xj, wj = roots_jacobi(m, alpha, 0.0)
    u = 1.0 - d + 0.5 * d * (xj + 1.0)
    us.append(u)
    ws.append((0.5 * d) ** (alpha + 1.0) * wj * u ** (n - 1))
    u, w = np.concatenate(us), np.concatenate(ws)
    beta = math.exp(gammaln(n) + gammaln(alpha + 1.0) - gammaln(n + alpha + 1.0))
    return u, w / beta


def radial_depth(pole_norm: float) -> int:
    """Grading depth resolving (1 - u |a|^2)^(-s) down to its scale 1 - |a|^2."""
    gap = 1.0 - min(float(pole_norm), _POLE_CAP) ** 2
    return max(0, math.ceil(math.log2(1.0 / gap)))


def normalization_constant(n: int, alpha: float) -> float:
    """c_alpha = Gamma(n+1+alpha) / (Gamma(n+1) Gamma(alpha+1))."""
    if not alpha > -1:
        raise DivergentWeight(f"(1-|z|^2)^alpha is not integrable for alpha={alpha}")
    return float(np.exp(gammaln(n + 1 + alpha) - gammaln(n + 1) - gammaln(alpha + 1)))


# -- deterministic integrals ---------------------------------------------------

def _pole_vector(pole, n: int):
    if pole is None:
        return None
    c = np.asarray(pole, dtype=complex).reshape(-1)
    if c.shape != (n,):
        raise ValueError("pole hint has the wrong dimension")
    nc = float(np.linalg.norm(c))
    if nc == 0:
        return None
    if nc > _POLE_CAP:
        c = c * (_POLE_CAP / nc)
        nc = _POLE_CAP
    return c


def _centre(c):
    """Pullback centre for a peak at c.

    Up to |c| = PULL_RADIUS the centre is c itself.  Further out it stays at
    radius max(PULL_RADIUS, hyperbolic midpoint of 0 and c), which keeps both
    the Jacobian bump and the image of the peak at least ~0.1 wide.
    """
    if c is None:
        return None
    cn = float(np.linalg.norm(c))
    if cn < 1e-2:
        return None
    mid = (1.0 - math.sqrt(1.0 - cn * cn)) / cn
    return c * (min(cn, max(PULL_RADIUS, mid)) / cn)


def _sphere_sum(h: Integrand, nodes, w, b, r: float = 1.0):
    if b is None:
        vals = h(r * nodes)
    else:
        vals = h(r * mobius_batch(b, nodes)) * poisson_szego(b, nodes)
    return np.dot(w, vals), np.dot(w, np.abs(vals))


def _refine(level: Callable[[int], Optional[tuple]], cfg: QuadConfig) -> IntegralResult:
    """Run levels -1, 0, 1, ... until two successive values agree.

    Level -1 halves every node count, so a well-resolved integrand costs only
    the base rule plus an eighth or so.  Agreement is measured relative to
    int |h|.
    """
    prev = None
    for k in range(-1, cfg.max_refine + 1):
        out = level(k)
        if out is None:
            break
        value, scale, used = out
        delta = None if prev is None else abs(value - prev[0])
        if delta is not None and delta <= cfg.rel_tol * max(scale, 1e-300):
            return IntegralResult(value, None, used, True, delta)
        prev = (value, scale, used, delta)
    if prev is None:
        raise ValueError("node budget too small for even the base rule")
    return IntegralResult(prev[0], None, prev[2], False, prev[3])


def _auto(cfg: QuadConfig, n: int, pole) -> QuadConfig:
    # the disc is cheap enough to follow the pole; n >= 2 relies on refinement
    if n == 1 and pole is not None:
        return cfg.for_pole(float(np.linalg.norm(pole)))
    return cfg


def sphere_integral(h: Integrand, n: int, cfg: QuadConfig = QuadConfig(), pole=None) -> IntegralResult:
    """int_{S^n} h dsigma with sigma(S^n) = 1.

    Successive refinements double every node count until two levels agree to
    ``cfg.rel_tol`` relative to int |h|; otherwise ``converged`` is False.
    """
    if n > 3:
        return _sphere_mc(h, n, cfg)
    pc = _pole_vector(pole, n)
    b = _centre(pc)
    base = _auto(cfg, n, pc)

    def level(k):
        c = base.refined(k)
        m = c.angular_nodes**n * c.simplex_nodes ** (n - 1)
        if k > 0 and m > cfg.max_points:
            return None
        nodes, w = sphere_rule(n, c.angular_nodes, c.simplex_nodes)
        v, s = _sphere_sum(h, nodes, w, b)
        return v, s, m

    return _refine(level, cfg)


def ball_integral(h: Integrand, n: int, alpha: float, cfg: QuadConfig = QuadConfig(), pole=None) -> IntegralResult:
    """int_{B_n} h dv_alpha for the probability measure dv_alpha, alpha > -1."""
    if not alpha > -1:
        raise DivergentWeight(f"dv_alpha is infinite for alpha={alpha}")
    alpha = float(alpha)
    if n > 3:
        return _ball_mc(h, n, alpha, cfg)
    pc = _pole_vector(pole, n)
    depth = 0 if pc is None else radial_depth(np.linalg.norm(pc))
    base = _auto(cfg, n, pc)

    def level(k):
        c = base.refined(k)
        m = c.angular_nodes**n * c.simplex_nodes ** (n - 1)
        if depth:
            u, wu = graded_radial_rule(n, alpha, c.radial_nodes, depth)
        else:
            u, wu = radial_rule(n, alpha, c.radial_nodes)
        if k > 0 and m * len(u) > cfg.max_points:
            return None
        nodes, w = sphere_rule(n, c.angular_nodes, c.simplex_nodes)
        total, scale = 0.0, 0.0
        for ui, wi in zip(u, wu):
            r = math.sqrt(ui)
            v, s = _sphere_sum(h, nodes, w, None if pc is None else _centre(r * pc), r)
            total += wi * v
            scale += wi * s
        return total, scale, m * len(u)

    return _refine(level, cfg)


# -- Monte Carlo -------------------------------------------------------------------

def mc_generators(seed: int, samples: int):
    """Counter-based Philox streams, one per fixed-size shard.

    Shard k always receives the k-th spawned key, so results do not depend on
    how shards are scheduled.
    """
    shards = -(-samples // _MC_SHARD)
    keys = np.random.SeedSequence(seed).spawn(shards)
    for k, key in enumerate(keys):
        size = min(_MC_SHARD, samples - k * _MC_SHARD)
        yield np.random.Generator(np.random.Philox(key)), size


def uniform_sphere(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    g = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1)[:, None]


def sample_ball(rng: np.random.Generator, size: int, n: int, alpha: float) -> np.ndarray:
    """Exact draws from the probability measure dv_alpha (alpha > -1)."""
    u = rng.beta(n, alpha + 1.0, size)
    return np.sqrt(u)[:, None] * uniform_sphere(rng, size, n)


def _mean_stderr(chunks):
    vals = np.concatenate(chunks)
    m = vals.mean()
    se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    return m, se, len(vals)


def _sphere_mc(h, n, cfg):
    chunks = [h(uniform_sphere(rng, size, n)) for rng, size in mc_generators(cfg.seed, cfg.mc_samples)]
    m, se, used = _mean_stderr(chunks)
    return IntegralResult(m, se, used, True)


def _ball_mc(h, n, alpha, cfg):
    chunks = [h(sample_ball(rng, size, n, alpha)) for rng, size in mc_generators(cfg.seed, cfg.mc_samples)]
    m, se, used = _mean_stderr(chunks)
    return IntegralResult(m, se, used, True)


def region_integral_mc(
    h: Integrand,
    membership: Callable[[np.ndarray], np.ndarray],
    n: int,
    weight_alpha: float = 0.0,
    cfg: QuadConfig = QuadConfig(),
) -> IntegralResult:
    """Monte Carlo estimate of int h 1_region dmu.

    For weight_alpha > -1, mu is the probability measure dv_alpha and samples
    are drawn from it exactly.  For weight_alpha <= -1, mu is the raw weight
    (1-|z|^2)^alpha dv; samples come from dv and carry that weight.
    """
    proposal = weight_alpha if weight_alpha > -1 else 0.0
    chunks, hits = [], 0
    for rng, size in mc_generators(cfg.seed, cfg.mc_samples):
        z = sample_ball(rng, size, n, proposal)
        inside = np.asarray(membership(z), dtype=bool)
        vals = np.zeros(size, dtype=complex if np.iscomplexobj(z) else float)
        if inside.any():
            hv = np.asarray(h(z[inside]))
            if weight_alpha <= -1:
                hv = hv * (1.0 - np.sum(np.abs(z[inside]) ** 2, axis=1)) ** weight_alpha
            vals[inside] = hv
        hits += int(inside.sum())
        chunks.append(vals)
    m, se, used = _mean_stderr(chunks)
    if np.all(np.imag(m) == 0):
        m = float(np.real(m))
    return IntegralResult(m, se, used, hits >= 100)
