"""Phase encoding of real vectors and the analytic fidelity oracle.

Real vectors are rescaled into phase angles in [0, pi] (radians), padded to
the nearest qubit dimension, and compared through the squared overlap of
their phase-encoded states.  Everything here is a pure function.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RescaleResult",
    "rescale",
    "pad_to_qubit_dim",
    "qubit_dim",
    "analytic_fidelity",
    "fidelity_cosine_expansion",
]


@dataclass(frozen=True)
class RescaleResult:
    """Angles produced by :func:`rescale`, flagged when the input had no spread."""

    angles: np.ndarray
    degenerate: bool


def _as_vector(values, name: str = "vector") -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"{name} must be a nonempty one-dimensional sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} entries must be finite")
    return v


def rescale(values) -> RescaleResult:
    """Affinely map a real vector onto phases in [0, pi].

    The minimum entry maps to 0 and the maximum to pi.  A constant vector
    has no spread to scale: every entry maps to the neutral phase 0 and the
    result is flagged degenerate.
    """
    v = _as_vector(values)
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        return RescaleResult(np.zeros_like(v), True)
    return RescaleResult((v - lo) / (hi - lo) * np.pi, False)


def qubit_dim(n: int) -> int:
    """Smallest power of two >= n."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return 1 << (n - 1).bit_length()


def pad_to_qubit_dim(angles) -> np.ndarray:
    """Zero-pad an angle vector to the next power-of-two dimension."""
    v = _as_vector(angles, "angles")
    target = qubit_dim(len(v))
    if target == len(v):
        return v.copy()
    return np.concatenate([v, np.zeros(target - len(v))])


def analytic_fidelity(theta, phi) -> float:
    """Squared overlap of two phase-encoded states.

    Computed as the modulus-squared of the mean of exp(i(theta_k - phi_k)),
    which keeps the value exact for arbitrary angles; the real cosine form
    is available as :func:`fidelity_cosine_expansion`.
    """
    t = _as_vector(theta, "theta")
    p = _as_vector(phi, "phi")
    if len(t) != len(p):
        raise ValueError(f"dimension mismatch: {len(t)} vs {len(p)}")
    overlap = np.exp(1j * (t - p)).sum() / len(t)
    return float(abs(overlap) ** 2)


def fidelity_cosine_expansion(delta) -> float:
    """Fidelity from phase differences: 1/N + (2/N^2) sum_{j<k} cos(d_k - d_j)."""
    d = _as_vector(delta, "delta")
    n = len(d)
    diffs = d[None, :] - d[:, None]
    pair_sum = float(np.cos(diffs[np.triu_indices(n, k=1)]).sum())
    return 1.0 / n + 2.0 * pair_sum / n**2
