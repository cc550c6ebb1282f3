"""Exact representations of holomorphic test functions on B_n.

Two closed families are supported, plus finite sums of them:

* ``TaylorPolynomial``: sparse map multi-index -> complex coefficient.
* ``KernelCombo``: ``prefactor * sum_k c_k <z,a>^k (1 - <z,a>)^(-s-k)``.

Both are closed under the radial derivative ``R = sum_j z_j d/dz_j``, so
``R^N f`` is available in closed form even at points next to the sphere,
where finite differences would be useless.

Points are arrays whose last axis has length n; evaluation broadcasts over
the leading axes.  ``<z,a>`` is ``sum_j z_j conj(a_j)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple, Union

import numpy as np

MultiIndex = Tuple[int, ...]

TAYLOR_DEGREE_CAP = 30
_BOUNDARY_SLACK = 1e-12


class DimensionMismatch(ValueError):
    pass


def multi_indices(n: int, degree: int) -> Iterator[MultiIndex]:
    """All m in Z_+^n with |m| == degree, in lexicographic order."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in multi_indices(n - 1, degree - first):
            yield (first,) + rest


def all_indices_up_to(n: int, degree: int) -> Iterator[MultiIndex]:
    return itertools.chain.from_iterable(multi_indices(n, d) for d in range(degree + 1))


def multi_factorial(m: MultiIndex) -> int:
    return math.prod(math.factorial(k) for k in m)


def _points(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != n:
        raise DimensionMismatch(f"expected points in C^{n}, got trailing axis {z.shape[-1]}")
    return z


def _check_closed_ball(z: np.ndarray) -> None:
    r2 = np.sum(np.abs(z) ** 2, axis=-1)
    if np.any(r2 > 1 + _BOUNDARY_SLACK):
        raise ValueError("evaluation point outside the closed unit ball")


@dataclass(frozen=True)
class TaylorPolynomial:
    n: int
    coeffs: Dict[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            m = tuple(int(k) for k in m)
            if len(m) != self.n or min(m) < 0:
                raise DimensionMismatch(f"bad multi-index {m} for n={self.n}")
            if c != 0:
                clean[m] = complex(c)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> "TaylorPolynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, m: MultiIndex, c: complex = 1.0) -> "TaylorPolynomial":
        return cls(len(m), {tuple(m): c})

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.coeffs), default=0)

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __mul__(self, c):
        return TaylorPolynomial(self.n, {m: c * v for m, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, TaylorPolynomial):
            _same_n(self, other)
            out = dict(self.coeffs)
            for m, v in other.coeffs.items():
                out[m] = out.get(m, 0) + v
            return TaylorPolynomial(self.n, out)
        return HoloSum(self.n, (self, other))


@dataclass(frozen=True)
class KernelCombo:
    n: int
    a: np.ndarray
    s: float
    terms: Tuple[Tuple[int, complex], ...] = ((0, 1.0),)
    prefactor: complex = 1.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).reshape(-1)
        if a.shape != (self.n,):
            raise DimensionMismatch(f"pole must lie in C^{self.n}")
        if np.linalg.norm(a) >= 1:
            raise ValueError("pole parameter must satisfy |a| < 1")
        if not self.s > 0:
            raise ValueError("base exponent s must be positive")
        ks = [int(k) for k, _ in self.terms]
        if len(set(ks)) != len(ks) or min(ks, default=0) < 0:
            raise ValueError("term powers must be distinct nonnegative integers")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "terms", tuple(sorted((int(k), complex(c)) for k, c in self.terms)))
        object.__setattr__(self, "prefactor", complex(self.prefactor))

    @classmethod
    def power(cls, a, s: float, prefactor: complex = 1.0) -> "KernelCombo":
        """``prefactor * (1 - <z,a>)^(-s)``."""
        a = np.atleast_1d(np.asarray(a, dtype=complex))
        return cls(len(a), a, s, ((0, 1.0),), prefactor)

    @property
    def pole_norm(self) -> float:
        return float(np.linalg.norm(self.a))

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __mul__(self, c):
        return KernelCombo(self.n, self.a, self.s, self.terms, self.prefactor * c)

    __rmul__ = __mul__

    def __add__(self, other):
        return HoloSum(self.n, (self, other))

    def __eq__(self, other):
        return (
            isinstance(other, KernelCombo)
            and self.n == other.n
            and np.array_equal(self.a, other.a)
            and self.s == other.s
            and self.terms == other.terms
            and self.prefactor == other.prefactor
        )

    def __hash__(self):
        return hash((self.n, self.a.tobytes(), self.s, self.terms, self.prefactor))


@dataclass(frozen=True)
class HoloSum:
    """Finite sum of polynomials and kernel combinations (perturbation probes)."""

    n: int
    parts: tuple

    def __post_init__(self):
        flat = []
        for f in self.parts:
            _same_n(self, f)
            flat.extend(f.parts if isinstance(f, HoloSum) else [f])
        object.__setattr__(self, "parts", tuple(flat))

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __mul__(self, c):
        return HoloSum(self.n, tuple(c * f for f in self.parts))

    __rmul__ = __mul__

    def __add__(self, other):
        return HoloSum(self.n, (self, other))


HoloFunction = Union[TaylorPolynomial, KernelCombo, HoloSum]


def _same_n(f, g) -> None:
    if f.n != g.n:
        raise DimensionMismatch(f"dimensions differ: {f.n} vs {g.n}")


def inner(z: np.ndarray, a: np.ndarray) -> np.ndarray:
    """<z, a> = sum_j z_j conj(a_j), broadcasting over leading axes of z."""
    return z @ np.conj(a)


def evaluate(f: HoloFunction, z) -> np.ndarray:
    """Pointwise value of ``f``; scalar in, scalar out."""
    z = _points(z, f.n)
    _check_closed_ball(z)
    out = _eval(f, z)
    return out[()] if out.ndim == 0 else out


def _eval(f: HoloFunction, z: np.ndarray) -> np.ndarray:
    if isinstance(f, TaylorPolynomial):
        out = np.zeros(z.shape[:-1], dtype=complex)
        if not f.coeffs:
            return out
        deg = f.degree
        # powers[j][k] = z_j^k
        powers = [[np.ones(z.shape[:-1], dtype=complex)] for _ in range(f.n)]
        for j in range(f.n):
            for _ in range(deg):
                powers[j].append(powers[j][-1] * z[..., j])
        for m, c in f.coeffs.items():
            term = np.full(z.shape[:-1], c, dtype=complex)
            for j, k in enumerate(m):
                if k:
                    term = term * powers[j][k]
            out += term
        return out
    if isinstance(f, KernelCombo):
        w = inner(z, f.a)
        one_minus = 1.0 - w
        out = np.zeros(z.shape[:-1], dtype=complex)
        for k, c in f.terms:
            if c != 0:
                out += c * w**k * one_minus ** (-f.s - k)
        return f.prefactor * out
    return sum(_eval(g, z) for g in f.parts)


def radial_derivative(f: HoloFunction) -> HoloFunction:
    """Exact R f.

    Kernel terms follow
    R[w^k (1-w)^(-s-k)] = k w^k (1-w)^(-s-k) + (s+k) w^(k+1) (1-w)^(-s-k-1),
    with w = <z,a>.  Term slots are kept even when their coefficient is zero, so
    R^N of a pure power carries exactly N+1 terms.
    """
    if isinstance(f, TaylorPolynomial):
        return TaylorPolynomial(f.n, {m: sum(m) * c for m, c in f.coeffs.items()})
    if isinstance(f, KernelCombo):
        new: Dict[int, complex] = {}
        for k, c in f.terms:
            new[k] = new.get(k, 0) + k * c
            new[k + 1] = new.get(k + 1, 0) + (f.s + k) * c
        return KernelCombo(f.n, f.a, f.s, tuple(new.items()), f.prefactor)
    return HoloSum(f.n, tuple(radial_derivative(g) for g in f.parts))


def radial_derivative_power(f: HoloFunction, N: int) -> HoloFunction:
    if N < 0:
        raise ValueError("N must be nonnegative")
    for _ in range(N):
        f = radial_derivative(f)
    return f


def _rising(x: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= x + i
    return out


def truncate_to_taylor(f: KernelCombo, degree: int, cap: int = TAYLOR_DEGREE_CAP) -> TaylorPolynomial:
    """Taylor polynomial of ``f`` through total degree ``degree``.

    Uses (1-w)^(-s) = sum_j (s)_j w^j / j! and the multinomial expansion of
    w^d = <z,a>^d.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree > cap:
        raise OverflowError(f"degree {degree} exceeds the expansion cap {cap}")
    abar = np.conj(f.a)
    coeffs: Dict[MultiIndex, complex] = {}
    for d in range(degree + 1):
        # coefficient of w^d
        cw = sum(c * _rising(f.s + k, d - k) / math.factorial(d - k) for k, c in f.terms if k <= d)
        if cw == 0:
            continue
        for m in multi_indices(f.n, d):
            mono = math.factorial(d) / multi_factorial(m)
            coeffs[m] = f.prefactor * cw * mono * np.prod(abar ** np.array(m))
    return TaylorPolynomial(f.n, coeffs)


def random_polynomial(n: int, degree: int, seed: int) -> TaylorPolynomial:
    """Every multi-index with |m| <= degree gets a standard complex normal coefficient."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    rng = np.random.default_rng(seed)
    idx = list(all_indices_up_to(n, degree))
    vals = (rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))) / math.sqrt(2)
    # standard normal draws are never exactly zero, so every index survives
    return TaylorPolynomial(n, dict(zip(idx, vals)))


# -- JSON ------------------------------------------------------------------------

def _c2j(c: complex) -> list:
    return [float(np.real(c)), float(np.imag(c))]


def _j2c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def to_json(f: HoloFunction) -> dict:
    if isinstance(f, TaylorPolynomial):
        return {
            "kind": "poly",
            "n": f.n,
            "coeffs": [[list(m), _c2j(c)] for m, c in sorted(f.coeffs.items())],
        }
    if isinstance(f, KernelCombo):
        return {
            "kind": "kernel",
            "n": f.n,
            "a": [_c2j(x) for x in f.a],
            "s": float(f.s),
            "terms": [[k, _c2j(c)] for k, c in f.terms],
            "prefactor": _c2j(f.prefactor),
        }
    return {"kind": "sum", "n": f.n, "parts": [to_json(g) for g in f.parts]}


def from_json(obj: dict) -> HoloFunction:
    kind = obj["kind"]
    n = int(obj["n"])
    if kind == "poly":
        return TaylorPolynomial(n, {tuple(m): _j2c(c) for m, c in obj["coeffs"]})
    if kind == "kernel":
        return KernelCombo(
            n,
            np.array([_j2c(x) for x in obj["a"]]),
            float(obj["s"]),
            tuple((int(k), _j2c(c)) for k, c in obj["terms"]),
            _j2c(obj.get("prefactor", 1.0)),
        )
    if kind == "sum":
        return HoloSum(n, tuple(from_json(g) for g in obj["parts"]))
    raise ValueError(f"unknown function kind {kind!r}")


def parse_function(text: str, n: int) -> HoloFunction:
    """Compact CLI syntax.

    ``const:c``              constant c
    ``mono:m1,...,mn[:c]``   c z^m
    ``kernel:s:a1,...,an``   (1 - <z,a>)^(-s), real pole coordinates
    ``@path.json``           serialized function
    """
    if text.startswith("@"):
        import json

        with open(text[1:], encoding="utf-8") as fh:
            f = from_json(json.load(fh))
        if f.n != n:
            raise DimensionMismatch(f"function has n={f.n}, requested n={n}")
        return f
    head, _, rest = text.partition(":")
    if head == "const":
        return TaylorPolynomial.constant(n, complex(rest or "1"))
    if head == "mono":
        idx, _, c = rest.partition(":")
        m = tuple(int(x) for x in idx.split(","))
        if len(m) != n:
            raise DimensionMismatch(f"multi-index {m} does not have length {n}")
        return TaylorPolynomial.monomial(m, complex(c or "1"))
    if head == "kernel":
        s, _, a = rest.partition(":")
        pole = np.array([float(x) for x in a.split(",")]) if a else np.zeros(n)
        if len(pole) != n:
            raise DimensionMismatch(f"pole {list(pole)} does not lie in C^{n}")
        return KernelCombo.power(pole, float(s))
    raise ValueError(f"cannot parse function {text!r}")
