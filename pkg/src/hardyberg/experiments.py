"""Numeric sweeps that turn the sharpness statements into pass/fail tables.

Every experiment returns a ``SweepTable``: records of (parameters, value,
reference, deviation), a tolerance, and metadata (seed, quadrature settings,
basis tag).  The verdict is computed from the records alone: a record passes
when its deviation is at most its own tolerance (or the table's).

Contractivity sweeps are falsification harnesses.  They can certify a
violation, and then serialize the offending function, but passing only adds
evidence for contractivity.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from . import funcrep
from .funcrep import HoloSum, KernelCombo, TaylorPolynomial, random_polynomial
from .geometry import (
    BoundaryPoint,
    Finite,
    Form,
    Infinity,
    admissible_curve,
    area_function_curve,
    area_order,
    carleson_weight,
)
from .integrate import QuadConfig, QuadratureError
from .norms import ConsistencyError, forelli_rudin_result, norm_result
from .params import (
    Bergman,
    Hardy,
    LogarithmicGrowth,
    SpaceSpec,
    TightStatus,
    classify,
    growth_envelope,
    tight_fitting,
)

SCHEMA_VERSION = 1
FIXTURE_ENV = "HARDYBERG_FIXTURES"

DEFAULT_A_GRID = (0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99)
A_CAP = 0.99
EPS_FLOOR = 2.0**-12
DEFAULT_EPS_GRID = tuple(2.0 ** -k for k in range(3, 13))
# 1 - |z|^2 halves from 0.32 down to 1 - 0.995^2
DEFAULT_FR_RADII = tuple(math.sqrt(1.0 - (1.0 - 0.995**2) * 2.0**k) for k in range(5, -1, -1))

CONTRACT_TOL = 1e-4
EXTREMAL_TOL = 1e-3
WITNESS_EXACT_TOL = 1e-3
COMPACT_CEILING = 0.1
SOURCE_NORM_TOL = 0.01


class PreconditionError(ValueError):
    """The experiment does not apply to the given pair."""


# -- fixtures ------------------------------------------------------------------------

def fixture_dir() -> str:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return override
    return str(resources.files("hardyberg") / "data")


def load_fixture(name: str) -> Any:
    with open(os.path.join(fixture_dir(), name), encoding="utf-8") as fh:
        return json.load(fh)


def _bands() -> dict:
    try:
        return load_fixture("bands.json")
    except FileNotFoundError:
        return {}


# -- tables ------------------------------------------------------------------------------

def _plain(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        x = x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


@dataclass(frozen=True)
class Record:
    params: Dict[str, Any]
    value: float
    reference: Optional[float] = None
    deviation: float = 0.0
    tol: Optional[float] = None

    def as_dict(self) -> dict:
        out = {
            "params": {k: _plain(v) for k, v in self.params.items()},
            "value": _plain(self.value),
            "reference": _plain(self.reference),
            "deviation": _plain(self.deviation),
        }
        if self.tol is not None:
            out["tol"] = self.tol
        return out


def _sort_key(rec: Record):
    key = []
    for v in rec.params.values():
        if isinstance(v, (int, float, np.floating, np.integer)) and not isinstance(v, bool):
            key.append((0, float(v), ""))
        else:
            key.append((1, 0.0, str(v)))
    return tuple(key)


@dataclass
class SweepTable:
    name: str
    basis: str
    records: List[Record]
    tolerance: float
    metadata: Dict[str, Any] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.records:
            raise ValueError("a sweep table needs at least one record")
        self.records = sorted(self.records, key=_sort_key)

    def record_passes(self, rec: Record) -> bool:
        tol = self.tolerance if rec.tol is None else rec.tol
        return bool(np.isfinite(rec.deviation)) and rec.deviation <= tol

    @property
    def passed(self) -> bool:
        return all(self.record_passes(r) for r in self.records)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failures(self) -> List[Record]:
        return [r for r in self.records if not self.record_passes(r)]

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "basis": self.basis,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "metadata": self.metadata,
            "diagnostics": self.diagnostics,
            "records": [r.as_dict() for r in self.records],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), default=_plain, **kw)

    def to_csv(self) -> str:
        keys: List[str] = []
        for r in self.records:
            keys.extend(k for k in r.params if k not in keys)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys + ["value", "reference", "deviation", "tol", "pass", "basis", "seed"])
        seed = self.metadata.get("seed", "")
        for r in self.records:
            row = [_plain(r.params.get(k, "")) for k in keys]
            tol = self.tolerance if r.tol is None else r.tol
            ref = "" if r.reference is None else _plain(r.reference)
            w.writerow(row + [_plain(r.value), ref, _plain(r.deviation), tol, int(self.record_passes(r)), self.basis, seed])
        return buf.getvalue()


def _meta(cfg: QuadConfig, **extra) -> dict:
    out = {"seed": cfg.seed, "cfg": asdict(cfg)}
    out.update(extra)
    return out


def _fail_record(params: dict, err: Exception) -> Record:
    return Record(dict(params, error=type(err).__name__), math.nan, None, math.inf)


# -- witnesses ----------------------------------------------------------------------------

def _growth_exponent(space: SpaceSpec, n: int) -> float:
    env = growth_envelope(space, n)
    if isinstance(env, LogarithmicGrowth):
        raise PreconditionError(f"{space} grows only logarithmically; no power witness")
    return float(env.exponent)


def _natural_measure(space: SpaceSpec) -> bool:
    """Hardy or alpha > -1, where |1 - <z,a>|^(-2(n+1+alpha)) integrates in closed form."""
    return isinstance(space, Hardy) or space.alpha > -1


def direction_vectors(n: int, count: int, seed: int) -> np.ndarray:
    """e_1 followed by ``count`` images of e_1 under random unitaries."""
    rng = np.random.default_rng(seed)
    out = [np.eye(n, dtype=complex)[0]]
    for _ in range(count):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        out.append(q[:, 0])
    return np.array(out)


def witness_function(a: np.ndarray, exponent: float, scale: float = 1.0) -> KernelCombo:
    """f_a = (1-|a|^2)^e (1 - <z,a>)^(-2e) / scale."""
    aa = float(np.real(np.vdot(a, a)))
    return KernelCombo.power(a, 2.0 * exponent, (1.0 - aa) ** exponent / scale)


def _check_grid(a_grid: Sequence[float]) -> np.ndarray:
    g = np.asarray(a_grid, dtype=float)
    if g.ndim != 1 or len(g) == 0 or np.any(np.diff(g) <= 0) or g[0] <= 0 or g[-1] > A_CAP:
        raise ValueError(f"|a| grid must be strictly increasing in (0, {A_CAP}]")
    return g


def noncompactness_witness(
    source: SpaceSpec,
    target: SpaceSpec,
    n: int,
    cfg: QuadConfig = QuadConfig(),
    a_grid: Sequence[float] = DEFAULT_A_GRID,
    directions: int = 8,
) -> SweepTable:
    """Target norms of source-normalized f_a along an |a| grid.

    f_a saturates the growth of the source.  If the classifier says the
    inclusion is not compact the target norms must stay away from 0: exactly 1
    when the reproducing identity applies on both sides, otherwise above the
    band recorded in the fixtures.  If it is compact they must fall below
    COMPACT_CEILING by the last grid point.
    """
    v = classify(source, target, n)
    if not v.contains:
        raise PreconditionError(f"{source} is not contained in {target} for n={n}")
    grid = _check_grid(a_grid)
    e = _growth_exponent(source, n)
    compact = v.compact.value == "yes"
    exact_source = _natural_measure(source)
    exact_chain = exact_source and _natural_measure(target) and math.isclose(e, _growth_exponent(target, n), abs_tol=1e-12)
    key = f"witness:{source}->{target}:n={n}"
    band = _bands().get(key)
    dirs = direction_vectors(n, directions, cfg.seed)
    records: List[Record] = []
    for r in grid:
        for j, u in enumerate(dirs):
            a = r * u
            params = {"|a|": float(r), "direction": j}
            try:
                scale = 1.0
                if not exact_source:
                    scale = norm_result(witness_function(a, e), source, n, cfg).value
                f = witness_function(a, e, scale)
                src = norm_result(f, source, n, cfg)
                tgt = norm_result(f, target, n, cfg)
            except (QuadratureError, ConsistencyError) as err:
                records.append(_fail_record(params, err))
                continue
            records.append(Record(dict(params, quantity="source"), src.value, 1.0, abs(src.value - 1.0), SOURCE_NORM_TOL))
            if compact:
                last = r == grid[-1]
                ref = COMPACT_CEILING if last else None
                dev = max(0.0, tgt.value - COMPACT_CEILING) if last else 0.0
                records.append(Record(dict(params, quantity="target"), tgt.value, ref, dev, 0.0))
            elif exact_chain:
                records.append(Record(dict(params, quantity="target"), tgt.value, 1.0, abs(tgt.value - 1.0), WITNESS_EXACT_TOL))
            else:
                lo, hi = band if band else (None, None)
                dev = 0.0 if lo is None else max(0.0, lo - tgt.value, tgt.value - hi)
                records.append(Record(dict(params, quantity="target"), tgt.value, lo, dev, 0.0))
    table = SweepTable(
        "noncompactness_witness",
        v.basis,
        records,
        0.0,
        _meta(cfg, source=str(source), target=str(target), n=n, compact=compact, exponent=e, band=band),
    )
    targets = [r.value for r in table.records if r.params.get("quantity") == "target"]
    if not compact and band is None and not exact_chain and targets:
        # no recorded band: require the norms not to collapse along the grid
        floor = 0.25 * targets[0]
        table.records.append(
            Record({"|a|": float(grid[-1]), "direction": -1, "quantity": "min/first"}, min(targets), floor, max(0.0, floor - min(targets)), 0.0)
        )
    table.diagnostics["numeric_compact"] = _numeric_compact(table, compact)
    table.diagnostics["agrees_with_classifier"] = table.passed
    return table


def _numeric_compact(table: SweepTable, compact: bool) -> Optional[bool]:
    tg = [r for r in table.records if r.params.get("quantity") == "target" and np.isfinite(r.value)]
    if not tg:
        return None
    last = max(r.params["|a|"] for r in tg)
    vals = [r.value for r in tg if r.params["|a|"] == last]
    return bool(max(vals) < COMPACT_CEILING)


# -- Forelli-Rudin ---------------------------------------------------------------------

def richardson_slope(y: np.ndarray, J: np.ndarray):
    """Growth exponent t of J ~ y^(-t) from samples on y_{k+1} = y_k / 2.

    Local slopes of successive increments cancel the additive constant in J;
    two Richardson steps then remove the O(y) and O(y^2) corrections.
    Returns the final estimate and the intermediate slopes.
    """
    dJ = np.diff(J)
    local = np.log(dJ[1:] / dJ[:-1]) / np.log(y[0] / y[1])
    r1 = 2.0 * local[1:] - local[:-1]
    r2 = (4.0 * r1[1:] - r1[:-1]) / 3.0
    return float(r2[-1]), local, r1, r2


def richardson_limit(J: np.ndarray, decay: float, ratio: float, levels: int = 4):
    """Limit of J = L - C y^decay (1 + O(y)) + (analytic in y), y shrinking by ``ratio``.

    Eliminates the correction exponents decay, 1, decay + 1, 2, ... in turn.
    Returns the final extrapolant and the last value of every level.
    """
    exps = sorted({decay + k for k in range(3)} | {float(k) for k in range(1, 3)})[:levels]
    L = np.asarray(J, dtype=float)
    out = []
    for e in exps:
        if len(L) < 2:
            break
        q = ratio ** (-e)
        L = (L[1:] - q * L[:-1]) / (1.0 - q)
        out.append(float(L[-1]))
    return out[-1], out


def fr_limit(alpha: float, t: float, n: int) -> float:
    """lim J as |z| -> 1 for t < 0: Gamma(n+1+a) Gamma(-t) / Gamma((n+1+a-t)/2)^2."""
    c = n + 1 + alpha
    return float(np.exp(gammaln(c) + gammaln(-t) - 2.0 * gammaln((c - t) / 2.0)))


def forelli_rudin_sweep(
    alpha: float,
    t: float,
    n: int,
    radii: Sequence[float] = DEFAULT_FR_RADII,
    cfg: QuadConfig = QuadConfig(),
) -> SweepTable:
    """J(z) along z = r e_1.

    t >= 0: the growth exponent of J in 1/(1-|z|^2) must equal t within 0.05.
    t < 0: J must be bounded.  The tail increments must contract, and the
    limit extrapolated from the y^(-t), y, ... expansion must match the closed
    form within 1%.
    """
    r = np.asarray(radii, dtype=float)
    if len(r) < 6 or np.any(np.diff(r) <= 0) or r[0] <= 0 or r[-1] > 0.995 + 1e-12:
        raise ValueError("need at least 6 increasing radii in (0, 0.995]")
    y = 1.0 - r**2
    ratios = y[:-1] / y[1:]
    if not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise ValueError("radii must make 1 - r^2 a geometric sequence")
    records: List[Record] = []
    J = []
    for ri in r:
        z = np.zeros(n, dtype=complex)
        z[0] = ri
        res = forelli_rudin_result(z, alpha, t, n, cfg)
        J.append(res.real)
        dev = 0.0 if res.converged else math.inf
        records.append(Record({"r": float(ri), "quantity": "J"}, res.real, None, dev))
    J = np.asarray(J)
    diag: Dict[str, Any] = {}
    last = float(r[-1])
    if t >= 0:
        slope, local, r1, r2 = richardson_slope(y, J)
        fit = float(np.polyfit(-np.log(y[-3:]), np.log(J[-3:]), 1)[0])
        diag.update(local_slopes=local.tolist(), richardson1=r1.tolist(), richardson2=r2.tolist(), loglog_fit=fit)
        records.append(Record({"r": last, "quantity": "slope"}, slope, float(t), abs(slope - t), 0.05))
    else:
        dJ = np.diff(J)
        rho = dJ[1:] / dJ[:-1]
        # early increments may still grow; the tail must contract toward 2^t
        ok = bool(np.all(dJ > 0) and np.all(rho[-2:] < 1) and rho[-1] <= rho[-2])
        limit, levels = richardson_limit(J, -t, float(ratios[0]))
        ref = fr_limit(alpha, t, n)
        tail = limit - float(J[-1])
        diag.update(increments=dJ.tolist(), ratios=rho.tolist(), expected_ratio=2.0**t, extrapolants=levels)
        records.append(Record({"r": last, "quantity": "geometric_decay"}, float(rho[-1]), 2.0**t, 0.0 if ok else math.inf, 0.0))
        records.append(Record({"r": last, "quantity": "limit"}, limit, ref, abs(limit - ref) / ref, 0.01))
        records.append(Record({"r": last, "quantity": "tail/limit"}, tail / limit, None, 0.0))
    return SweepTable("forelli_rudin_sweep", "Lemma4", records, 0.05, _meta(cfg, alpha=alpha, t=t, n=n), diag)


# -- admissible regions ----------------------------------------------------------------

def _tail_slopes(eps: np.ndarray, vals: np.ndarray, k: int = 5):
    """(raw, increment) log-log slopes against log(1/eps) over the last k points."""
    X = np.log(1.0 / eps)
    raw = float(np.polyfit(X[-k:], np.log(vals[-k:]), 1)[0])
    inc = np.abs(np.diff(vals))
    inc_slope = float(np.polyfit(X[1:][-k:], np.log(np.maximum(inc[-k:], 1e-300)), 1)[0])
    return raw, inc_slope


CONVERGENCE_SLOPE = -0.2


def _eps_grid(eps_grid) -> np.ndarray:
    eps = np.asarray(eps_grid, dtype=float)
    if len(eps) < 6 or np.any(np.diff(eps) >= 0) or eps[-1] < EPS_FLOOR * (1 - 1e-12) or eps[0] >= 1:
        raise ValueError(f"eps grid must be strictly decreasing, at least 6 long, and >= {EPS_FLOOR}")
    return eps


def admissible_sweep(
    t: float,
    n: int,
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
    cfg: QuadConfig = QuadConfig(),
    zeta: Optional[BoundaryPoint] = None,
) -> SweepTable:
    """Truncated admissible integrals of both integrand forms along eps.

    The invariant form must grow with log-log slope max(t, 0) +- 0.1.  For
    t < 0 its increments must also decay (increment slope below -0.2).  The
    ratio of the two forms must stay within the band recorded in the fixtures
    and within the pointwise band [2^-(n+1+t), 1].
    """
    eps = _eps_grid(eps_grid)
    zeta = zeta or BoundaryPoint.axis(n)
    inv = admissible_curve(t, zeta, eps, Form.INVARIANT_POWER, n, cfg)
    ker = admissible_curve(t, zeta, eps, Form.KERNEL_POWER, n, cfg)
    vi = np.array([x.value for x in inv])
    vk = np.array([x.value for x in ker])
    records: List[Record] = []
    for e, a, b in zip(eps, inv, ker):
        dev = 0.0 if (a.converged and b.converged) else math.inf
        records.append(Record({"eps": float(e), "quantity": "invariant"}, a.value, None, dev))
        records.append(Record({"eps": float(e), "quantity": "kernel"}, b.value, None, dev))
    raw, inc = _tail_slopes(eps, vi)
    records.append(Record({"eps": float(eps[-1]), "quantity": "slope"}, raw, max(t, 0.0), abs(raw - max(t, 0.0)), 0.1))
    if t < 0:
        records.append(Record({"eps": float(eps[-1]), "quantity": "increment_slope"}, inc, CONVERGENCE_SLOPE, max(0.0, inc - CONVERGENCE_SLOPE), 0.0))
    ratio = vi / vk
    lo_pt = 2.0 ** (-(n + 1 + t)) if n + 1 + t > 0 else 1.0
    hi_pt = 1.0 if n + 1 + t > 0 else 2.0 ** (-(n + 1 + t))
    band = _bands().get(f"admissible:n={n}:t={float(t):g}")
    for e, q in zip(eps, ratio):
        dev = max(0.0, lo_pt - q, q - hi_pt)
        if band:
            dev = max(dev, band[0] - q, q - band[1])
        records.append(Record({"eps": float(e), "quantity": "ratio"}, float(q), band[0] if band else lo_pt, dev, 0.0))
    diag = {"increment_slope": inc, "pointwise_band": [lo_pt, hi_pt], "recorded_band": band,
            "stderr_invariant": [x.stderr for x in inv]}
    return SweepTable("admissible_sweep", "Lemma15", records, 0.1, _meta(cfg, t=t, n=n, zeta=[[c.real, c.imag] for c in zeta.zeta]), diag)


# -- contractivity --------------------------------------------------------------------

def contractive_claim(source: SpaceSpec, target: SpaceSpec, n: int) -> str:
    """Why the pair is expected to be contractive: proved, conjectured, obvious or none."""
    tf = tight_fitting(source, target, n)
    if tf.is_tight:
        return "proved" if tf.status is TightStatus.PROVED_N1 else "conjectured"
    p, q = float(source.p), float(target.p)
    if n == 1 and isinstance(source, Hardy) and isinstance(target, Bergman):
        a = float(target.alpha)
        if a > -1 and math.isclose(q, (a + 2) * p, rel_tol=1e-12):
            return "proved"
    if n == 1 and isinstance(source, Bergman) and isinstance(target, Bergman):
        al = float(source.alpha) + 2
        if al > (1 + math.sqrt(17)) / 4 and math.isclose(float(target.alpha), al - 1, abs_tol=1e-12) and math.isclose(q, p * (al + 1) / al, rel_tol=1e-12):
            return "proved"
    if isinstance(source, Hardy) and isinstance(target, Hardy) and p >= q:
        return "obvious"
    if isinstance(source, Hardy) and isinstance(target, Bergman) and target.alpha > -1 and p >= q:
        return "obvious"
    if isinstance(source, Bergman) and isinstance(target, Bergman) and source.alpha > -1:
        if target.alpha >= source.alpha and p >= q:
            return "obvious"
    return "none"


def polynomial_seeds(seed: int, samples: int) -> List[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint32)]


def _ratio(f, source, target, n, cfg):
    s = norm_result(f, source, n, cfg, check_monotone=False)
    t = norm_result(f, target, n, cfg, check_monotone=False)
    return t.value / s.value, s.rel_error + t.rel_error, s.converged and t.converged


def contractivity_sweep(
    source: SpaceSpec,
    target: SpaceSpec,
    n: int,
    samples: int = 1000,
    degree: int = 10,
    seed: int = 0,
    cfg: QuadConfig = QuadConfig(rel_tol=1e-6),
    probe_a: Sequence[float] = (0.0, 0.3, 0.7),
) -> SweepTable:
    """Ratios ||f||_target / ||f||_source over random polynomials and kernels.

    Polynomials have degree uniform in 0..degree and complex normal
    coefficients; kernel probes use the extremal power of the pair (or 2n/p,
    or the source growth exponent) at the given |a|.
    """
    v = classify(source, target, n)
    if not v.contains:
        raise PreconditionError(f"{source} is not contained in {target} for n={n}")
    cfg = replace(cfg, seed=seed)
    rng = np.random.default_rng(seed)
    records: List[Record] = []
    worst, counterexample, max_unc, unconverged = 0.0, None, 0.0, 0
    for i, s in enumerate(polynomial_seeds(seed, samples)):
        d = int(rng.integers(0, degree + 1))
        f = random_polynomial(n, d, s)
        ratio, unc, conv = _ratio(f, source, target, n, cfg)
        max_unc = max(max_unc, unc)
        unconverged += not conv
        dev = max(0.0, ratio - 1.0)
        records.append(Record({"kind": "poly", "index": i, "degree": d}, ratio, 1.0, dev))
        if ratio > worst:
            worst = ratio
            if dev > CONTRACT_TOL:
                counterexample = funcrep.to_json(f)
    tf = tight_fitting(source, target, n)
    s_exp = float(tf.extremal_exponent) if tf.is_tight else 2.0 * _growth_exponent(source, n)
    for r in probe_a:
        a = np.zeros(n, dtype=complex)
        a[0] = r
        f = KernelCombo.power(a, s_exp)
        ratio, unc, conv = _ratio(f, source, target, n, cfg)
        max_unc = max(max_unc, unc)
        unconverged += not conv
        dev = max(0.0, ratio - 1.0)
        records.append(Record({"kind": "kernel", "index": len(records), "degree": -1, "|a|": r}, ratio, 1.0, dev))
        if ratio > worst:
            worst = ratio
            if dev > CONTRACT_TOL and counterexample is None:
                counterexample = funcrep.to_json(f)
    claim = contractive_claim(source, target, n)
    diag = {"max_ratio": worst, "max_rel_uncertainty": max_unc, "unconverged": unconverged, "counterexample": counterexample}
    return SweepTable(
        "contractivity_sweep",
        v.basis,
        records,
        CONTRACT_TOL,
        _meta(cfg, source=str(source), target=str(target), n=n, samples=samples, degree=degree, claim=claim),
        diag,
    )


# -- extremals ------------------------------------------------------------------------------

def extremal_check(
    source: SpaceSpec,
    target: SpaceSpec,
    n: int,
    a_grid: Sequence[float] = (0.0, 0.3, 0.5, 0.7),
    cfg: QuadConfig = QuadConfig(),
    perturbations: int = 4,
    perturbation_size: float = 0.02,
) -> SweepTable:
    """Conjectured extremals c (1 - <z,a>)^(-s) must have equal norms.

    Perturbing them by small random polynomials must not push the ratio
    above 1 + 1e-4 (a heuristic local-maximality probe).
    """
    tf = tight_fitting(source, target, n)
    if not tf.is_tight:
        raise PreconditionError(f"{source} -> {target} is not a tight fitting for n={n}")
    s = float(tf.extremal_exponent)
    records: List[Record] = []
    seeds = polynomial_seeds(cfg.seed + 1, perturbations * len(a_grid))
    for i, r in enumerate(a_grid):
        if not 0 <= r <= A_CAP:
            raise ValueError(f"|a| must lie in [0, {A_CAP}]")
        a = np.zeros(n, dtype=complex)
        a[0] = r
        f = KernelCombo.power(a, s)
        try:
            ns = norm_result(f, source, n, cfg)
            nt = norm_result(f, target, n, cfg)
        except (QuadratureError, ConsistencyError) as err:
            records.append(_fail_record({"|a|": r, "probe": -1}, err))
            continue
        dev = abs(ns.value - nt.value) / ns.value
        records.append(Record({"|a|": r, "probe": -1}, nt.value / ns.value, 1.0, dev, EXTREMAL_TOL))
        for j in range(perturbations):
            p = random_polynomial(n, 3, seeds[i * perturbations + j])
            size = max(abs(c) for c in p.coeffs.values())
            g = HoloSum(n, (f, p * (perturbation_size * ns.value / size)))
            ratio, _, _ = _ratio(g, source, target, n, cfg)
            records.append(Record({"|a|": r, "probe": j}, ratio, 1.0, max(0.0, ratio - 1.0), CONTRACT_TOL))
    return SweepTable(
        "extremal_check",
        "Conj22",
        records,
        EXTREMAL_TOL,
        _meta(cfg, source=str(source), target=str(target), n=n, extremal_exponent=s, status=tf.status.value,
              probe="heuristic local-maximality"),
    )


# -- Carleson diagnostics ----------------------------------------------------------

STABLE_SLOPE = 0.1


def carleson_boundary_check(
    p: float,
    q: float,
    alpha: float,
    n: int,
    cfg: QuadConfig = QuadConfig(),
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
    zeta: Optional[BoundaryPoint] = None,
) -> SweepTable:
    """Truncation curve of the area function of g = (1-|z|^2)^(1+alpha).

    q >= 2: A_inf must stabilize (slope <= 0.1) exactly when H^p embeds in
    A^q_alpha.  q < 2: A_r with r = 2/(2-q) must converge (increment slope
    below -0.2) exactly when it embeds.
    """
    if not 0 < q < p:
        raise ValueError("need 0 < q < p")
    eps = _eps_grid(eps_grid)
    zeta = zeta or BoundaryPoint.axis(n)
    v = classify(Hardy(p), Bergman(q, alpha), n)
    order = area_order(q)
    g = carleson_weight(alpha)
    curve = area_function_curve(g, zeta, order, eps, n, cfg)
    vals = np.array([c.value for c in curve])
    records = [Record({"eps": float(e), "quantity": "A"}, c.value, None, 0.0 if c.converged else math.inf) for e, c in zip(eps, curve)]
    diag: Dict[str, Any] = {"order": "inf" if order is Infinity else order.r}
    if isinstance(order, Finite):
        # A_r^r is the admissible integral at t = -(1+alpha) r
        t = -(1.0 + alpha) * order.r
        raw, inc = _tail_slopes(eps, vals**order.r)
        embeds = inc < CONVERGENCE_SLOPE
        diag.update(t=t, raw_slope=raw, increment_slope=inc)
        if t > 0:
            records.append(Record({"eps": float(eps[-1]), "quantity": "slope"}, raw, t, abs(raw - t), 0.1))
    else:
        raw, _ = _tail_slopes(eps, vals)
        embeds = raw <= STABLE_SLOPE
        diag.update(raw_slope=raw)
    agree = embeds == v.contains
    records.append(Record({"eps": float(eps[-1]), "quantity": "verdict"}, float(embeds), float(v.contains), 0.0 if agree else 1.0, 0.0))
    diag.update(numeric_contains=bool(embeds), classifier_contains=v.contains)
    return SweepTable("carleson_boundary_check", "Thm16", records, 0.0, _meta(cfg, p=p, q=q, alpha=alpha, n=n), diag)
