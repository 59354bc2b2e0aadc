"""Riccati-based linear design: certificate matrix and feedback gain.

For a linear pair (A, B) with weighting rho and target rate mu, the
shifted equality equation

    (A + mu I)^T P + P (A + mu I) - rho P B B^T P + I = 0

is solved by Newton iteration on Lyapunov equations; the identity
inflation makes the corresponding inequality strict. The returned gain
is K = B^T P with B unscaled; rho enters by scaling B inside the solve.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NotStabilizableError,
    SingularMatrixError,
)
from .linalg import lyapunov_solve, sym_eig
from .metric import MetricCertificate

NEWTON_TOL = 1e-10
NEWTON_MAX_STEPS = 100


@dataclass(frozen=True)
class LinearDesign:
    a: np.ndarray
    b: np.ndarray
    rho: float
    mu_target: float
    certificate: MetricCertificate
    gain: np.ndarray
    newton_iterates: tuple = field(repr=False, default=())


def _check_pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"a must be square, got {a.shape}")
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if b.ndim != 2 or b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(
            f"b has shape {b.shape}, expected ({a.shape[0]}, m)"
        )
    return a, b


def bass_initial_gain(a, b):
    """Stabilizing initial gain by Bass's shifted-Lyapunov method.

    With lam = ||a||_F + 1 the matrix -a - lam I is Hurwitz, so
    (-a - lam I) Z + Z (-a - lam I)^T = -2 b b^T has a PSD solution; the
    gain is K0 = b^T Z^+ using the spectral pseudo-inverse, which keeps
    uncontrollable-but-stable directions unforced instead of failing on
    a singular Z. Stabilization is then verified directly: the closed
    loop must admit a positive definite Lyapunov solution, otherwise the
    pair is declared not stabilizable.
    """
    a, b = _check_pair(a, b)
    n = a.shape[0]
    lam = float(np.linalg.norm(a, "fro")) + 1.0
    shifted = -a - lam * np.eye(n)
    try:
        z = lyapunov_solve(shifted.T, 2.0 * b @ b.T)
    except SingularMatrixError as exc:
        raise NotStabilizableError(f"initial-gain Lyapunov solve failed: {exc}") from exc
    dec = sym_eig(z)
    cut = 1e-12 * max(1.0, float(dec.eigenvalues[-1]) if dec.eigenvalues.size else 0.0)
    inv = np.where(dec.eigenvalues > cut, 1.0 / np.maximum(dec.eigenvalues, cut), 0.0)
    k0 = b.T @ (dec.eigenvectors * inv) @ dec.eigenvectors.T
    closed = a - b @ k0
    try:
        y = lyapunov_solve(closed, np.eye(n))
    except SingularMatrixError as exc:
        raise NotStabilizableError(
            "closed loop under the initial gain is not Hurwitz"
        ) from exc
    if float(sym_eig(y).eigenvalues[0]) <= 0.0:
        raise NotStabilizableError(
            "closed loop under the initial gain admits no positive "
            "definite Lyapunov solution; pair is not stabilizable"
        )
    return k0


def solve_ari(a, b, rho, mu):
    """Solve the shifted Riccati equation and package the design.

    Newton steps: with A_s = a + mu I and B_s = b sqrt(rho), iterate
        P_j: (A_s - B_s K_j)^T P + P (A_s - B_s K_j) + I + K_j^T K_j = 0
        K_{j+1} = B_s^T P_j
    from the Bass initial gain. The iterate sequence is nonincreasing in
    the semidefinite order after the first step and converges
    quadratically for stabilizable pairs.
    """
    a, b = _check_pair(a, b)
    if rho <= 0.0 or mu <= 0.0:
        raise ValueError("rho and mu must be positive")
    n = a.shape[0]
    a_shift = a + mu * np.eye(n)
    b_scaled = b * np.sqrt(rho)
    k = bass_initial_gain(a_shift, b_scaled)
    iterates = []
    p_prev = None
    for _ in range(NEWTON_MAX_STEPS):
        closed = a_shift - b_scaled @ k
        try:
            p = lyapunov_solve(closed, np.eye(n) + k.T @ k)
        except SingularMatrixError as exc:
            raise NotStabilizableError(
                f"Newton step lost stabilizability: {exc}"
            ) from exc
        iterates.append(p)
        k = b_scaled.T @ p
        # relative stop: the quadratic phase bottoms out near eps * ||P||
        tol = NEWTON_TOL * max(1.0, float(np.max(np.abs(p))))
        if p_prev is not None and float(np.max(np.abs(p - p_prev))) <= tol:
            break
        p_prev = p
    else:
        raise NoConvergenceError(
            f"Newton iteration did not converge in {NEWTON_MAX_STEPS} steps"
        )
    cert = MetricCertificate.from_matrix(p, rho, mu)
    return LinearDesign(
        a=a,
        b=b,
        rho=float(rho),
        mu_target=float(mu),
        certificate=cert,
        gain=b.T @ p,
        newton_iterates=tuple(iterates),
    )
