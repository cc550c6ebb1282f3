"""Embedding, compactness and tight-fitting decisions for Hardy and weighted
Bergman spaces on the unit ball of C^n.

Spaces are written ``Hardy(p)`` for H^p and ``Bergman(p, alpha)`` for A^p_alpha.
Parameters may be ``int``, ``Fraction`` or ``float``.  Exact inputs are
compared exactly; as soon as a float is involved comparisons use an absolute
tolerance ``TOL`` and ties count as equality, so that boundary cases typed as
decimals are not pushed off the boundary by rounding.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Optional, Union

TOL = 1e-12


class InvalidParameter(ValueError):
    """Raised for non-positive exponents or dimensions below one."""


@dataclass(frozen=True)
class Hardy:
    p: Real

    def __post_init__(self):
        if not self.p > 0:
            raise InvalidParameter(f"Hardy exponent must be positive, got {self.p}")

    def __str__(self):
        return f"H:{_fmt(self.p)}"


@dataclass(frozen=True)
class Bergman:
    p: Real
    alpha: Real

    def __post_init__(self):
        if not self.p > 0:
            raise InvalidParameter(f"Bergman exponent must be positive, got {self.p}")

    def __str__(self):
        return f"A:{_fmt(self.p)}:{_fmt(self.alpha)}"


SpaceSpec = Union[Hardy, Bergman]


class Compact(enum.Enum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class Verdict:
    contains: bool
    equal: bool
    compact: Compact
    basis: str

    @property
    def proper(self) -> bool:
        return self.contains and not self.equal

    def as_dict(self) -> dict:
        compact = {Compact.YES: True, Compact.NO: False}.get(self.compact)
        return {
            "contains": self.contains,
            "compact": compact,
            "equal": self.equal,
            "proper": self.proper,
            "basis": self.basis,
        }


@dataclass(frozen=True)
class PowerGrowth:
    exponent: Real


@dataclass(frozen=True)
class LogarithmicGrowth:
    pass


GrowthEnvelope = Union[PowerGrowth, LogarithmicGrowth]


class TightStatus(enum.Enum):
    PROVED_N1 = "proved-n1"
    CONJECTURED = "conjectured"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class TightFitVerdict:
    is_tight: bool
    status: TightStatus
    extremal_exponent: Optional[Real] = None

    def as_dict(self) -> dict:
        s = self.extremal_exponent
        return {
            "is_tight": self.is_tight,
            "status": self.status.value,
            "extremal_exponent": None if s is None else float(s),
        }


# -- number handling ---------------------------------------------------------

def parse_real(text: str) -> Fraction:
    """Parse ``"2"``, ``"-1.5"`` or ``"3/2"`` into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameter(f"not a real literal: {text!r}") from exc


def parse_space(text: str) -> SpaceSpec:
    """Parse ``H:p`` or ``A:p:alpha``."""
    parts = text.strip().split(":")
    kind = parts[0].upper()
    if kind == "H" and len(parts) == 2:
        return Hardy(parse_real(parts[1]))
    if kind == "A" and len(parts) == 3:
        return Bergman(parse_real(parts[1]), parse_real(parts[2]))
    raise InvalidParameter(f"space must look like H:p or A:p:alpha, got {text!r}")


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x) if isinstance(x, float) else str(x)


def _exact(*xs) -> bool:
    return all(isinstance(x, Rational) for x in xs)


def _div(x, y):
    if _exact(x, y):
        return Fraction(x) / Fraction(y)
    return float(x) / float(y)


def _cmp(x, y) -> int:
    """Three-way comparison, exact for rationals, tolerant otherwise."""
    if _exact(x, y):
        return (x > y) - (x < y)
    d = float(x) - float(y)
    if abs(d) <= TOL:
        return 0
    return 1 if d > 0 else -1


def _le(x, y) -> bool:
    return _cmp(x, y) <= 0


def _lt(x, y) -> bool:
    return _cmp(x, y) < 0


def _eq(x, y) -> bool:
    return _cmp(x, y) == 0


def same_space(x: SpaceSpec, y: SpaceSpec) -> bool:
    if type(x) is not type(y) or not _eq(x.p, y.p):
        return False
    return isinstance(x, Hardy) or _eq(x.alpha, y.alpha)


def _is_h2_a2m1(x: SpaceSpec, y: SpaceSpec) -> bool:
    pair = {type(x), type(y)}
    if pair != {Hardy, Bergman}:
        return False
    h = x if isinstance(x, Hardy) else y
    b = y if isinstance(y, Bergman) else x
    return _eq(h.p, 2) and _eq(b.p, 2) and _eq(b.alpha, -1)


def _check_n(n) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"dimension n must be a positive integer, got {n!r}")


# -- classification ------------------------------------------------------------

def _verdict(contains: bool, compact: bool, basis: str, equal: bool = False) -> Verdict:
    if not contains:
        return Verdict(False, False, Compact.NOT_APPLICABLE, basis)
    return Verdict(True, equal, Compact.YES if compact and not equal else Compact.NO, basis)


def classify(source: SpaceSpec, target: SpaceSpec, n: int) -> Verdict:
    """Decide whether ``source`` embeds in ``target`` on B_n, and compactly."""
    _check_n(n)
    if same_space(source, target):
        return _verdict(True, False, "identity", equal=True)
    if _is_h2_a2m1(source, target):
        return _verdict(True, False, "Lemma11.b", equal=True)

    p, q = source.p, target.p
    if isinstance(source, Bergman) and isinstance(target, Hardy):
        a = source.alpha
        if _lt(p, q):
            c = _cmp(_div(n + 1 + a, p), _div(n, q))
            return _verdict(c <= 0, c < 0, "ThmA.a")
        if _eq(p, q):
            basis = "Thm13.a" if _le(p, 2) else "Thm13.b"
        else:
            basis = "ThmB.a"
        contains = _le(a, -1) if _le(q, 2) else _lt(a, -1)
        return _verdict(contains, _lt(a, -1), basis)

    if isinstance(source, Hardy) and isinstance(target, Bergman):
        a = target.alpha
        if _lt(p, q):
            c = _cmp(_div(n, p), _div(n + 1 + a, q))
            return _verdict(c <= 0, c < 0, "ThmA.b")
        if _eq(p, q):
            basis = "Thm13.c" if not _lt(p, 2) else "Thm13.d"
        else:
            basis = "ThmB.b"
        contains = _lt(-1, a) if _lt(q, 2) else _le(-1, a)
        return _verdict(contains, _lt(-1, a), basis)

    if isinstance(source, Bergman) and isinstance(target, Bergman):
        a, b = source.alpha, target.alpha
        if _le(p, q):
            c = _cmp(_div(n + 1 + a, p), _div(n + 1 + b, q))
            return _verdict(c <= 0, c < 0, "ThmC.a")
        return _verdict(_lt(_div(1 + a, p), _div(1 + b, q)), True, "ThmC.b")

    # Hardy -> Hardy
    if _lt(q, p):
        return _verdict(True, True, "Sec6.remark")
    return _verdict(False, False, "Lemma3.derived")


def growth_envelope(space: SpaceSpec, n: int) -> GrowthEnvelope:
    """Maximal pointwise growth of functions in ``space`` near the sphere."""
    _check_n(n)
    if isinstance(space, Hardy):
        return PowerGrowth(_div(n, space.p))
    e = n + 1 + space.alpha
    if _le(e, 0):
        return LogarithmicGrowth()
    return PowerGrowth(_div(e, space.p))


def tight_fitting(source: SpaceSpec, target: SpaceSpec, n: int) -> TightFitVerdict:
    """Tight fittings (proper, contractive, non-compact) with canonical norms.

    Only alpha, beta > -1 carry canonical norms, so every other configuration
    is reported as not applicable.  The extremal exponent is the power s of
    the kernel family c (1 - <z,a>)^(-s) conjectured to attain equality.
    """
    _check_n(n)
    status = TightStatus.PROVED_N1 if n == 1 else TightStatus.CONJECTURED
    p, q = source.p, target.p
    if isinstance(target, Bergman) and _lt(-1, target.alpha) and _lt(p, q):
        b = target.alpha
        if isinstance(source, Bergman) and _lt(-1, source.alpha):
            a = source.alpha
            if _eq((n + 1 + a) * q, (n + 1 + b) * p):
                return TightFitVerdict(True, status, _div(2 * (n + 1 + a), p))
        elif isinstance(source, Hardy):
            if _eq(n * q, (n + 1 + b) * p):
                return TightFitVerdict(True, status, _div(2 * n, p))
    return TightFitVerdict(False, TightStatus.NOT_APPLICABLE, None)
