"""Hyperbolic geometry of B_n: Mobius involutions, Bergman metric balls,
admissible approach regions and the area functions built on them.

Volumes are normalized (v(B_n) = 1).  Region integrals are Monte Carlo and
truncated at |z| < 1 - eps, since the interesting integrals sit exactly on the
divergence boundary and only truncation curves are meaningful numerically.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ._ball import mobius_batch
from .integrate import IntegralResult, QuadConfig, QuadratureError, ball_integral, mc_generators, normalization_constant

METRIC_RADIUS = 1.0
_UNIT_TOL = 1e-12


class MonteCarloError(RuntimeError):
    def __init__(self, what: str, result: IntegralResult):
        super().__init__(f"{what}: Monte Carlo estimate unreliable ({result.nodes_used} samples)")
        self.result = result


def _vec(z, n: Optional[int] = None) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if n is not None and z.shape != (n,):
        raise ValueError(f"expected a point of C^{n}")
    return z


@dataclass(frozen=True)
class BoundaryPoint:
    zeta: np.ndarray

    def __post_init__(self):
        z = _vec(self.zeta)
        if abs(np.linalg.norm(z) - 1.0) > _UNIT_TOL:
            raise ValueError("boundary point must have |zeta| = 1")
        z.setflags(write=False)
        object.__setattr__(self, "zeta", z)

    @classmethod
    def axis(cls, n: int, j: int = 0) -> "BoundaryPoint":
        return cls(np.eye(n, dtype=complex)[j])

    @property
    def n(self) -> int:
        return len(self.zeta)


def unitary_from(zeta: np.ndarray) -> np.ndarray:
    """A unitary U with U e_1 = zeta."""
    zeta = _vec(zeta)
    n = len(zeta)
    q, _ = np.linalg.qr(np.column_stack([zeta, np.eye(n, dtype=complex)]))
    q = q[:, :n]
    # qr fixes the first column only up to a phase
    ph = np.vdot(q[:, 0], zeta)
    q[:, 0] *= ph / abs(ph)
    return q


# -- Mobius maps and the Bergman metric --------------------------------------

def mobius(a, z) -> np.ndarray:
    """phi_a(z): the involution of B_n exchanging a and 0."""
    a = _vec(a)
    if np.linalg.norm(a) >= 1:
        raise ValueError("|a| must be < 1")
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != len(a):
        raise ValueError("dimension mismatch")
    if np.any(np.sum(np.abs(z) ** 2, axis=-1) > 1 + _UNIT_TOL):
        raise ValueError("|z| must be <= 1")
    return mobius_batch(a, z)


def pseudo_distance(z, w) -> np.ndarray:
    """|phi_z(w)|, vectorized over w."""
    return np.linalg.norm(mobius(z, w), axis=-1)


def bergman_distance(z, w, n: int) -> float:
    """beta(z, w) = artanh |phi_z(w)|."""
    z, w = _vec(z, n), _vec(w, n)
    if np.linalg.norm(z) >= 1 or np.linalg.norm(w) >= 1:
        raise ValueError("points must lie inside the ball")
    return float(np.arctanh(min(float(pseudo_distance(z, w)), 1.0)))


def _metric_ball_axes(z: np.ndarray, radius: float):
    R = math.tanh(radius)
    zz = float(np.real(np.vdot(z, z)))
    s = (1.0 - zz) / (1.0 - R * R * zz)
    centre = (1.0 - R * R) / (1.0 - R * R * zz) * z
    return R * s, R * math.sqrt(s), centre


def metric_ball_volume_result(z, n: int, cfg: QuadConfig = QuadConfig(), radius: float = METRIC_RADIUS) -> IntegralResult:
    """Normalized volume of D(z, radius) by membership sampling.

    D(z, r) is contained in the product of a disc of radius R s (complex line
    through z) and a ball of radius R sqrt(s) (orthogonal complement), with
    R = tanh r and s = (1-|z|^2)/(1-R^2|z|^2).  Sampling that product keeps the
    acceptance rate near 1/n for every z.
    """
    z = _vec(z, n)
    if np.linalg.norm(z) >= 1:
        raise ValueError("|z| must be < 1")
    r1, r2, centre = _metric_ball_axes(z, radius)
    U = unitary_from(z / np.linalg.norm(z)) if np.any(z) else np.eye(n, dtype=complex)
    box = n * r1**2 * r2 ** (2 * n - 2)  # normalized volume of disc x ball
    R = math.tanh(radius)
    chunks, hits = [], 0
    for rng, size in mc_generators(cfg.seed, cfg.mc_samples):
        pts = np.zeros((size, n), dtype=complex)
        pts[:, 0] = r1 * np.sqrt(rng.uniform(size=size)) * np.exp(2j * np.pi * rng.uniform(size=size))
        if n > 1:
            g = rng.standard_normal((size, n - 1)) + 1j * rng.standard_normal((size, n - 1))
            g /= np.linalg.norm(g, axis=1)[:, None]
            pts[:, 1:] = g * (r2 * rng.uniform(size=size) ** (1.0 / (2 * n - 2)))[:, None]
        w = centre + pts @ U.T
        inside = np.sum(np.abs(w) ** 2, axis=1) < 1.0
        ok = np.zeros(size, dtype=bool)
        ok[inside] = np.linalg.norm(mobius_batch(z, w[inside]), axis=1) < R
        hits += int(ok.sum())
        chunks.append(ok.astype(float))
    vals = np.concatenate(chunks) * box
    return IntegralResult(
        float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals))), len(vals), hits >= 100
    )


def metric_ball_volume(z, n: int, cfg: QuadConfig = QuadConfig(), radius: float = METRIC_RADIUS) -> float:
    res = metric_ball_volume_result(z, n, cfg, radius)
    if not res.converged:
        raise MonteCarloError("metric ball volume", res)
    return res.value


def metric_ball_measure(z, n: int, beta: float, cfg: QuadConfig = QuadConfig(), radius: float = METRIC_RADIUS) -> float:
    """dv_beta(D(z, radius)) by pulling the ball back to |u| < R through phi_z.

    With w = phi_z(u): 1 - |w|^2 = (1-|z|^2)(1-|u|^2)/|1-<u,z>|^2 and
    dv(w) = ((1-|z|^2)/|1-<u,z>|^2)^(n+1) dv(u), and the remaining integrand
    over |u| < R = tanh(radius) is smooth.
    """
    z = _vec(z, n)
    if not beta > -1:
        raise ValueError("beta must be > -1")
    R = math.tanh(radius)
    zz = float(np.real(np.vdot(z, z)))
    e = 2.0 * (n + 1 + beta)

    def h(x):
        u = R * x
        return (1.0 - np.sum(np.abs(u) ** 2, axis=-1)) ** beta * np.abs(1.0 - u @ np.conj(z)) ** (-e)

    res = ball_integral(h, n, 0.0, cfg, pole=R * z)
    if not res.converged:
        raise QuadratureError("metric ball measure", res)
    return normalization_constant(n, beta) * (1.0 - zz) ** (beta + n + 1) * R ** (2 * n) * res.real


# -- admissible regions ----------------------------------------------------------

def in_admissible_region(z, zeta) -> np.ndarray:
    """|1 - <z, zeta>| < 1 - |z|^2, vectorized over z."""
    if isinstance(zeta, BoundaryPoint):
        zeta = zeta.zeta
    z = np.asarray(z, dtype=complex)
    zz = np.sum(np.abs(z) ** 2, axis=-1)
    out = np.abs(1.0 - z @ np.conj(_vec(zeta))) < 1.0 - zz
    return out[()] if out.ndim == 0 else out


def in_dr_region(w, r: float) -> np.ndarray:
    """D_r = {w in the disc : |1 - r w| < 1 - r^2}."""
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    w = np.asarray(w, dtype=complex)
    out = (np.abs(w) < 1) & (np.abs(1.0 - r * w) < 1.0 - r * r)
    return out[()] if out.ndim == 0 else out


class Form(enum.Enum):
    INVARIANT_POWER = "invariant"
    KERNEL_POWER = "kernel"


def _koranyi_sample(rng, size: int, n: int, dmin: float):
    """Points of the box around e_1 containing Gamma(e_1) with 1 - Re z_1 > dmin.

    delta = 1 - Re z_1 is log-uniform on [dmin, 1], Im z_1 uniform on
    [-2 delta, 2 delta] and z' uniform in the C^(n-1) ball of radius
    sqrt(2 delta).  Returns points and 1/density against normalized volume.
    """
    L = math.log(1.0 / dmin)
    d = dmin * np.exp(rng.uniform(0.0, L, size))
    z = np.zeros((size, n), dtype=complex)
    z[:, 0] = 1.0 - d + 1j * d * rng.uniform(-2.0, 2.0, size)
    inv = d * L * 4.0 * d  # 1/density in (Re z_1, Im z_1)
    if n > 1:
        g = rng.standard_normal((size, n - 1)) + 1j * rng.standard_normal((size, n - 1))
        g /= np.linalg.norm(g, axis=1)[:, None]
        rad = np.sqrt(2.0 * d) * rng.uniform(size=size) ** (1.0 / (2 * n - 2))
        z[:, 1:] = g * rad[:, None]
        inv = inv * math.pi ** (n - 1) * (2.0 * d) ** (n - 1) / math.factorial(n - 1)
    return z, inv * math.factorial(n) / math.pi**n


def _region_curve(weight: Callable, zeta: BoundaryPoint, eps_grid, cfg: QuadConfig, check_chain: bool = True):
    """MC estimates of int_{Gamma(zeta), |z|<1-eps} weight dv for every eps.

    Common random numbers are shared across the eps grid, so successive
    differences are far less noisy than the values themselves.
    """
    n = zeta.n
    eps = np.asarray(eps_grid, dtype=float)
    if np.any(eps <= 0) or np.any(eps >= 1):
        raise ValueError("eps must lie in (0, 1)")
    # |z| < 1 - eps forces 1 - Re z_1 > eps (1 - eps/2) > eps / 2
    dmin = 0.5 * float(eps.min())
    U = unitary_from(zeta.zeta)
    sums = np.zeros(len(eps))
    sq = np.zeros(len(eps))
    hits = np.zeros(len(eps), dtype=int)
    total = 0
    for rng, size in mc_generators(cfg.seed, cfg.mc_samples):
        x, inv = _koranyi_sample(rng, size, n, dmin)
        z = x @ U.T
        inside = in_admissible_region(z, zeta.zeta)
        zi = z[inside]
        r = np.sqrt(np.sum(np.abs(zi) ** 2, axis=1))
        if check_chain and len(zi):
            k = np.abs(1.0 - zi @ np.conj(zeta.zeta))
            if np.any(k > 1.0 - r**2) or np.any(k < (1.0 - r) * (1 - 1e-12)):
                raise AssertionError("sampled point violates 1-|z|^2 >= |1-<z,zeta>| >= 1-|z|")
        vals = np.asarray(weight(zi), dtype=float) * inv[inside]
        for j, e in enumerate(eps):
            m = r < 1.0 - e
            v = vals[m]
            sums[j] += v.sum()
            sq[j] += (v * v).sum()
            hits[j] += int(m.sum())
        total += size
    mean = sums / total
    var = np.maximum(sq / total - mean**2, 0.0)
    se = np.sqrt(var / (total - 1))
    return mean, se, hits, total


def _power_weight(t: float, zeta: BoundaryPoint, form: Form, n: int):
    e = -(n + 1 + t)
    if form is Form.INVARIANT_POWER:
        return lambda z: (1.0 - np.sum(np.abs(z) ** 2, axis=1)) ** e
    return lambda z: np.abs(1.0 - z @ np.conj(zeta.zeta)) ** e


def admissible_curve(t: float, zeta: BoundaryPoint, eps_grid, form: Form, n: int, cfg: QuadConfig = QuadConfig()):
    """Truncated admissible integrals for every eps in the grid (one sample set)."""
    if zeta.n != n:
        raise ValueError("boundary point dimension mismatch")
    form = Form(form)
    mean, se, hits, total = _region_curve(_power_weight(t, zeta, form, n), zeta, eps_grid, cfg)
    return [IntegralResult(float(m), float(s), total, int(h) >= 100) for m, s, h in zip(mean, se, hits)]


def admissible_integral(t: float, zeta: BoundaryPoint, eps: float, form: Form, n: int, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """int over Gamma(zeta) cap {|z| < 1-eps} of (1-|z|^2)^(-(n+1+t)) dv
    (INVARIANT_POWER) or |1 - <z,zeta>|^(-(n+1+t)) dv (KERNEL_POWER)."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return admissible_curve(t, zeta, [eps], form, n, cfg)[0]


def region_volume(n: int) -> Optional[float]:
    """Exact normalized area of Gamma(1) in the disc; None for n > 1."""
    if n != 1:
        return None
    return (2.0 * math.pi - 3.0 * math.sqrt(3.0)) / (2.0 * math.pi)


# -- Carleson data and area functions ---------------------------------------------

@dataclass(frozen=True)
class RadialWeight:
    beta: float

    def __post_init__(self):
        if not self.beta > -1:
            raise ValueError("radial weight needs beta > -1")


@dataclass(frozen=True)
class WeightedSamples:
    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        m = np.asarray(self.masses, dtype=float).reshape(-1)
        if len(pts) != len(m) or np.any(m < 0):
            raise ValueError("need one nonnegative mass per point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", m)


@dataclass(frozen=True)
class CarlesonSpec:
    measure: Union[RadialWeight, WeightedSamples]
    q: float
    m: int
    p: float

    def __post_init__(self):
        if not (0 < self.q < self.p):
            raise ValueError("Carleson data needs 0 < q < p")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("derivative order m must be a positive integer")

    @classmethod
    def for_space(cls, p: float, q: float, alpha: float) -> "CarlesonSpec":
        """mu = dv_beta with beta = m q + alpha, m smallest with m q + alpha > -1."""
        m = max(1, math.floor((-1.0 - alpha) / q) + 1)
        return cls(RadialWeight(m * q + alpha), q, m, p)


def carleson_g(spec: CarlesonSpec, z, n: int, cfg: QuadConfig = QuadConfig()) -> float:
    """g(z) = mu(D(z,1)) / (1-|z|^2)^(q m + n)."""
    z = _vec(z, n)
    zz = float(np.real(np.vdot(z, z)))
    if zz >= 1:
        raise ValueError("|z| must be < 1")
    mu = spec.measure
    if isinstance(mu, RadialWeight):
        mass = metric_ball_measure(z, n, mu.beta, cfg)
    else:
        if mu.points.shape[1] != n:
            raise ValueError("sample points have the wrong dimension")
        d = np.linalg.norm(mobius_batch(z, mu.points), axis=1)
        mass = float(mu.masses[d < math.tanh(METRIC_RADIUS)].sum())
    return mass / (1.0 - zz) ** (spec.q * spec.m + n)


@dataclass(frozen=True)
class Finite:
    r: float


class _Infinity:
    def __repr__(self):
        return "Infinity"


Infinity = _Infinity()
Order = Union[Finite, _Infinity]


def area_order(q: float) -> Order:
    """Finite(2/(2-q)) for q < 2, Infinity otherwise."""
    return Finite(2.0 / (2.0 - q)) if q < 2 else Infinity


def _g_weight(g) -> Callable:
    if callable(g):
        return g
    raise TypeError("g must be a callable on points of the ball")


def area_function_curve(g, zeta: BoundaryPoint, order: Order, eps_grid, n: int, cfg: QuadConfig = QuadConfig()):
    """A_r(g)(zeta) or A_inf(g)(zeta) truncated at |z| < 1-eps, for each eps.

    ``g`` is a callable on points, or a CarlesonSpec (then g = carleson_g,
    which is slow and only practical for small sample counts).
    """
    if zeta.n != n:
        raise ValueError("boundary point dimension mismatch")
    if isinstance(g, CarlesonSpec):
        spec = g
        g = lambda z: np.array([carleson_g(spec, w, n, cfg) for w in z])
    g = _g_weight(g)
    eps = np.asarray(eps_grid, dtype=float)
    if isinstance(order, Finite):
        if not order.r > 0:
            raise ValueError("area function order must be positive")
        r = order.r

        def weight(z):
            return np.abs(g(z)) ** r * (1.0 - np.sum(np.abs(z) ** 2, axis=1)) ** (-(n + 1))

        mean, se, hits, total = _region_curve(weight, zeta, eps, cfg)
        vals = np.maximum(mean, 0.0) ** (1.0 / r)
        return [IntegralResult(float(v), float(s), total, int(h) >= 100) for v, s, h in zip(vals, se, hits)]
    return _sup_curve(g, zeta, eps, n, cfg)


def _sup_curve(g, zeta: BoundaryPoint, eps, n: int, cfg: QuadConfig):
    """sup of |g| over sampled points of Gamma(zeta) with |z| < 1-eps.

    The Koranyi box reaches the boundary; points along the segment (0, zeta)
    are added so that the part of the region near the origin is seen too.
    """
    U = unitary_from(zeta.zeta)
    dmin = 0.5 * float(eps.min())
    best = np.zeros(len(eps))
    total = 0
    for rng, size in mc_generators(cfg.seed, cfg.mc_samples):
        x, _ = _koranyi_sample(rng, size, n, dmin)
        z = x @ U.T
        z = np.vstack([z, np.linspace(1e-6, 1.0, 257)[:, None] * zeta.zeta[None, :]])
        z = z[in_admissible_region(z, zeta.zeta)]
        r = np.sqrt(np.sum(np.abs(z) ** 2, axis=1))
        vals = np.abs(np.asarray(g(z), dtype=float))
        for j, e in enumerate(eps):
            m = r < 1.0 - e
            if m.any():
                best[j] = max(best[j], float(vals[m].max()))
        total += size
    return [IntegralResult(float(b), None, total, b > 0) for b in best]


def area_function(g, zeta: BoundaryPoint, order: Order, eps: float, n: int, cfg: QuadConfig = QuadConfig()) -> float:
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if isinstance(order, Finite) and isinstance(g, CarlesonSpec) and not g.q < 2:
        raise ValueError("finite-order area function needs q < 2")
    res = area_function_curve(g, zeta, order, [eps], n, cfg)[0]
    if not res.converged:
        raise MonteCarloError("area function", res)
    return res.value


def carleson_weight(alpha: float) -> Callable:
    """The closed-form Carleson function g(z) = (1-|z|^2)^(1+alpha)."""
    return lambda z: (1.0 - np.sum(np.abs(np.asarray(z)) ** 2, axis=-1)) ** (1.0 + alpha)
