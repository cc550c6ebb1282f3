"""Regenerate data/bands.json from an independent, larger oracle run.

Admissible ratio bands: min/max of invariant/kernel over the eps grid with
4x the default samples and a different seed, widened by MARGIN.  Witness
floors: the smallest target norm over a finer |a| grid and 16 directions,
reduced by MARGIN.

    python3 scripts/make_bands.py [--out path]
"""
from __future__ import annotations

import argparse
import json
import os
from dataclasses import replace

import numpy as np

from hardyberg.experiments import DEFAULT_EPS_GRID, direction_vectors, witness_function, _growth_exponent
from hardyberg.geometry import BoundaryPoint, Form, admissible_curve
from hardyberg.integrate import QuadConfig
from hardyberg.norms import norm_result
from hardyberg.params import parse_space

MARGIN = 0.05
ORACLE_SEED = 20240917
ADMISSIBLE = [(n, t) for n in (1, 2) for t in (0.5, 1.0, -0.5, -1.0)]
WITNESS = [("H:2", "A:2:-1", 1), ("H:2", "A:2:-1", 2), ("H:3", "A:3:-1", 1), ("H:3", "A:3:-1", 2), ("A:1:-1", "H:1", 1)]
WITNESS_GRID = (0.05, 0.2, 0.4, 0.6, 0.75, 0.85, 0.9, 0.93, 0.96, 0.98, 0.99)


def admissible_band(n: int, t: float, cfg: QuadConfig):
    zeta = BoundaryPoint.axis(n)
    inv = admissible_curve(t, zeta, DEFAULT_EPS_GRID, Form.INVARIANT_POWER, n, cfg)
    ker = admissible_curve(t, zeta, DEFAULT_EPS_GRID, Form.KERNEL_POWER, n, cfg)
    q = np.array([a.value / b.value for a, b in zip(inv, ker)])
    return [float(q.min() * (1 - MARGIN)), float(q.max() * (1 + MARGIN))]


def witness_band(source: str, target: str, n: int, cfg: QuadConfig):
    s, t = parse_space(source), parse_space(target)
    e = _growth_exponent(s, n)
    vals = []
    for r in WITNESS_GRID:
        for u in direction_vectors(n, 16, cfg.seed):
            f = witness_function(r * u, e)
            src = norm_result(f, s, n, cfg).value
            vals.append(norm_result(f, t, n, cfg).value / src)
    return [float(min(vals) * (1 - MARGIN)), float(max(vals) * (1 + MARGIN))]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    here = os.path.join(os.path.dirname(__file__), "..", "src", "hardyberg", "data", "bands.json")
    ap.add_argument("--out", default=os.path.normpath(here))
    args = ap.parse_args(argv)
    mc = QuadConfig(seed=ORACLE_SEED, mc_samples=800_000)
    det = replace(QuadConfig(), seed=ORACLE_SEED)
    bands = {"_comment": f"oracle seed {ORACLE_SEED}, margin {MARGIN}; regenerate with scripts/make_bands.py"}
    for n, t in ADMISSIBLE:
        bands[f"admissible:n={n}:t={t:g}"] = admissible_band(n, t, mc)
    for s, t, n in WITNESS:
        bands[f"witness:{parse_space(s)}->{parse_space(t)}:n={n}"] = witness_band(s, t, n, det)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(bands, fh, indent=2)
        fh.write("\n")
    print(json.dumps(bands, indent=2))


if __name__ == "__main__":
    main()
