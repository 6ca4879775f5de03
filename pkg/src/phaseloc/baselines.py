"""Iterative phase retrieval baselines on dense (Gaussian) ensembles.

Both solvers take the dense measurement matrix A with rows conj(phi_m), so
A @ x is the vector of inner products, plus the observed intensities b.
Negative entries of b (noise artifacts) are clamped to zero on entry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import Underdetermined


@dataclass(frozen=True)
class IterativeOptions:
    max_iters: int = 2500
    step_size: float = 0.5
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (0.0 < self.step_size < 2.0):
            raise ValueError("step_size must lie in (0, 2)")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")


@dataclass(frozen=True)
class IterativeResult:
    xhat: np.ndarray
    iters_used: int
    final_residual: float
    converged: bool
    residuals: np.ndarray      # relative intensity residual per iteration
    amp_errors: np.ndarray     # magnitude-projection distance per iteration


def _phase(u: np.ndarray) -> np.ndarray:
    # phase(0) := 1 avoids a zero division in the magnitude projection
    mags = np.abs(u)
    out = np.ones_like(u)
    nz = mags > 0
    out[nz] = u[nz] / mags[nz]
    return out


def _residual(av: np.ndarray, b: np.ndarray, bnorm: float) -> float:
    return float(np.linalg.norm(np.abs(av) ** 2 - b) / bnorm)


def fienup_recover(a_mat: np.ndarray, b: np.ndarray,
                   opts: IterativeOptions | None = None,
                   x0: np.ndarray | None = None) -> IterativeResult:
    """Damped alternating projection between the data magnitudes and range(A).

    One step replaces the current measurement vector's magnitudes by sqrt(b),
    maps back by least squares, and moves a step_size fraction toward that
    projection. The least-squares operator is QR-prefactored once; each
    iteration costs two matrix-vector products and a triangular solve.
    Starts from x0 when given, otherwise from a seeded Gaussian draw.
    """
    opts = opts or IterativeOptions()
    a_mat = np.asarray(a_mat, dtype=np.complex128)
    m, n = a_mat.shape
    if m < n:
        raise Underdetermined(f"need m >= n, got m={m}, n={n}")
    b = np.maximum(np.asarray(b, dtype=np.float64), 0.0)
    root_b = np.sqrt(b)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        bnorm = 1.0  # fall back to an absolute residual for the all-zero target

    q_mat, r_mat = np.linalg.qr(a_mat)
    if x0 is not None:
        x = np.asarray(x0, dtype=np.complex128).copy()
    else:
        rng = np.random.default_rng(opts.seed)
        x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)

    beta = opts.step_size
    residuals, amp_errors = [], []
    converged = False
    iters = 0
    for iters in range(1, opts.max_iters + 1):
        av = a_mat @ x
        residuals.append(_residual(av, b, bnorm))
        amp_errors.append(float(np.linalg.norm(np.abs(av) - root_b)))
        if residuals[-1] <= opts.tol:
            converged = True
            break
        target = root_b * _phase(av)
        proj = solve_triangular(r_mat, q_mat.conj().T @ target)
        x = x + beta * (proj - x)

    return IterativeResult(
        xhat=x,
        iters_used=iters,
        final_residual=residuals[-1],
        converged=converged,
        residuals=np.asarray(residuals),
        amp_errors=np.asarray(amp_errors),
    )


def wf_gradient(a_mat: np.ndarray, b: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Descent direction (1/M) sum_m (|<phi_m, z>|^2 - b_m) <phi_m, z> phi_m."""
    u = a_mat @ z
    return a_mat.conj().T @ ((np.abs(u) ** 2 - b) * u) / a_mat.shape[0]


def spectral_init(a_mat: np.ndarray, b: np.ndarray, seed: int,
                  power_iters: int = 100) -> np.ndarray:
    """Leading eigenvector of the intensity-weighted covariance, by power iteration.

    Scaled so the squared norm is n * sum(b) / sum(||phi||^2), an estimate of
    the true signal energy.
    """
    m, n = a_mat.shape
    y_mat = a_mat.conj().T @ (b[:, None] * a_mat) / m
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(power_iters):
        v = y_mat @ v
        nv = np.linalg.norm(v)
        if nv == 0.0:
            break
        v /= nv
    sq_norms = float(np.sum(np.abs(a_mat) ** 2))
    lam = np.sqrt(n * float(np.sum(b)) / sq_norms) if sq_norms > 0 else 0.0
    return lam * v


def wirtinger_flow(a_mat: np.ndarray, b: np.ndarray,
                   opts: IterativeOptions | None = None,
                   power_iters: int = 100,
                   x0: np.ndarray | None = None) -> IterativeResult:
    """Spectrally initialized gradient descent on the intensity residual.

    Step size ramps up as mu_t = min(1 - exp(-t / 330), 0.4) and is divided
    by the squared norm of the initial iterate. Starts from x0 when given,
    skipping the spectral initialization.
    """
    opts = opts or IterativeOptions()
    a_mat = np.asarray(a_mat, dtype=np.complex128)
    m, n = a_mat.shape
    if m < n:
        raise Underdetermined(f"need m >= n, got m={m}, n={n}")
    b = np.maximum(np.asarray(b, dtype=np.float64), 0.0)
    root_b = np.sqrt(b)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        bnorm = 1.0

    if x0 is not None:
        z = np.asarray(x0, dtype=np.complex128).copy()
    else:
        z = spectral_init(a_mat, b, opts.seed, power_iters)
    norm0_sq = float(np.vdot(z, z).real)
    if norm0_sq == 0.0:
        norm0_sq = 1.0

    residuals, amp_errors = [], []
    converged = False
    iters = 0
    for iters in range(1, opts.max_iters + 1):
        u = a_mat @ z
        residuals.append(_residual(u, b, bnorm))
        amp_errors.append(float(np.linalg.norm(np.abs(u) - root_b)))
        if residuals[-1] <= opts.tol:
            converged = True
            break
        mu = min(1.0 - np.exp(-iters / 330.0), 0.4)
        grad = a_mat.conj().T @ ((np.abs(u) ** 2 - b) * u) / m
        z = z - (mu / norm0_sq) * grad

    return IterativeResult(
        xhat=z,
        iters_used=iters,
        final_residual=residuals[-1],
        converged=converged,
        residuals=np.asarray(residuals),
        amp_errors=np.asarray(amp_errors),
    )
