"""Complex signal vectors, phase canonicalization, and phase-invariant error metrics.

Signals are plain complex128 numpy arrays. Real signals are the special case
with zero imaginary parts; there is no separate real type.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import BadSparsity, DimensionMismatch, ZeroReference


def as_signal(values) -> np.ndarray:
    """Validate and convert to a complex128 signal vector.

    Rejects empty vectors and non-finite entries.
    """
    x = np.asarray(values, dtype=np.complex128)
    if x.ndim != 1 or x.size < 1:
        raise DimensionMismatch(f"signal must be a non-empty 1-d vector, got shape {x.shape}")
    if not np.all(np.isfinite(x.real)) or not np.all(np.isfinite(x.imag)):
        raise DimensionMismatch("signal entries must be finite")
    return x


def canonicalize(x: np.ndarray, zero_tol: float = 0.0) -> np.ndarray:
    """Rotate a signal so its first nonzero entry is a positive real.

    Representative of the global-phase equivalence class: all rotations
    e^{i*alpha} x map to the same output. The zero signal is returned as is.
    Entries with modulus <= zero_tol count as zero when picking the pivot.
    Exactly idempotent: the pivot entry is stored as its modulus, so a second
    pass sees phase 0 and changes nothing.
    """
    x = np.asarray(x, dtype=np.complex128)
    nz = np.flatnonzero(np.abs(x) > zero_tol)
    if nz.size == 0:
        return x.copy()
    pivot = int(nz[0])
    theta = np.angle(x[pivot])
    if theta == 0.0:
        return x.copy()
    y = x * np.exp(-1j * theta)
    y[pivot] = abs(x[pivot])
    return y


def rel_error_up_to_phase(x: np.ndarray, xhat: np.ndarray) -> float:
    """Relative l2 error between x and xhat minimized over a global phase.

    Returns min_theta ||x - e^{i*theta} xhat|| / ||x||. The optimum rotation
    aligns <x, xhat> to be real nonnegative; the residual is evaluated after
    applying it, which avoids the cancellation the expanded quadratic form
    suffers when the two signals nearly coincide.
    """
    x = np.asarray(x, dtype=np.complex128)
    xhat = np.asarray(xhat, dtype=np.complex128)
    if x.shape != xhat.shape:
        raise DimensionMismatch(f"shape mismatch: {x.shape} vs {xhat.shape}")
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        raise ZeroReference("reference signal is zero")
    inner = np.vdot(xhat, x)
    mag = abs(inner)
    rotation = inner / mag if mag > 0.0 else 1.0
    return float(np.linalg.norm(x - rotation * xhat) / nx)


def rel_error_up_to_phase_and_conj(x: np.ndarray, xhat: np.ndarray) -> float:
    """Relative error minimized over both global phase and conjugation."""
    return min(rel_error_up_to_phase(x, xhat), rel_error_up_to_phase(x, np.conj(xhat)))


def random_signal(n: int, seed: int) -> np.ndarray:
    """Signal with real and imaginary parts i.i.d. uniform on [-1/2, 1/2]."""
    if n < 1:
        raise DimensionMismatch(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    parts = rng.uniform(-0.5, 0.5, size=(2, n))
    return parts[0] + 1j * parts[1]


def random_sparse_signal(n: int, s: int, seed: int) -> np.ndarray:
    """Signal with exactly s nonzero entries at uniformly chosen positions."""
    if s < 1 or s > n:
        raise BadSparsity(f"sparsity must satisfy 1 <= s <= n, got s={s}, n={n}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(n, size=s, replace=False)
    parts = rng.uniform(-0.5, 0.5, size=(2, s))
    x = np.zeros(n, dtype=np.complex128)
    x[idx] = parts[0] + 1j * parts[1]
    return x


def signal_to_json(x: np.ndarray) -> dict:
    x = np.asarray(x, dtype=np.complex128)
    return {"n": int(x.size), "re": x.real.tolist(), "im": x.imag.tolist()}


def signal_from_json(obj: dict) -> np.ndarray:
    re, im = obj["re"], obj["im"]
    if len(re) != obj["n"] or len(im) != obj["n"]:
        raise DimensionMismatch("signal JSON: field lengths disagree with n")
    return as_signal(np.asarray(re) + 1j * np.asarray(im))


def save_signal(path, x: np.ndarray) -> None:
    with open(path, "w") as fh:
        json.dump(signal_to_json(x), fh)


def load_signal(path) -> np.ndarray:
    with open(path) as fh:
        return signal_from_json(json.load(fh))
