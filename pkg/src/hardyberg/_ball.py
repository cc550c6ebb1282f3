"""Vectorized ball automorphisms shared by the quadrature and geometry code."""
from __future__ import annotations

import numpy as np


def inner(z: np.ndarray, a: np.ndarray) -> np.ndarray:
    return z @ np.conj(a)


def mobius_batch(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """phi_a(z) = (a - P_a z - sqrt(1-|a|^2) Q_a z) / (1 - <z,a>) on the last axis."""
    aa = float(np.real(np.vdot(a, a)))
    if aa == 0.0:
        return -z
    w = inner(z, a)
    pz = (w / aa)[..., None] * a
    qz = z - pz
    return (a - pz - np.sqrt(1.0 - aa) * qz) / (1.0 - w)[..., None]


def poisson_szego(b: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """((1-|b|^2) / |1 - <eta,b>|^2)^n, the Jacobian of phi_b on the sphere."""
    n = eta.shape[-1]
    bb = float(np.real(np.vdot(b, b)))
    return ((1.0 - bb) / np.abs(1.0 - inner(eta, b)) ** 2) ** n
