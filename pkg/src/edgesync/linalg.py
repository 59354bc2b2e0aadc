"""Dense linear-algebra kernel used by every other module.

All matrix primitives the package needs live here so that tolerance
conventions are defined once. Tolerances are relative to
max(1, magnitude) so checks behave sanely near zero.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NonSymmetricError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

SYMMETRY_RTOL = 1e-9
NULLSPACE_RTOL = 1e-9
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class SymEig:
    """Eigendecomposition of a symmetric matrix.

    eigenvalues are ascending; eigenvectors are orthonormal columns, the
    i-th column pairing with the i-th eigenvalue.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(a, name="matrix"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    return a


def sym_eig(a):
    """Decompose a symmetric matrix into ascending eigenvalues and vectors.

    Raises NonSymmetricError when the input exceeds the relative symmetry
    tolerance, NoConvergenceError if the underlying iteration fails.
    """
    a = _as_square(a)
    if a.size:
        skew = np.max(np.abs(a - a.T))
        if skew > SYMMETRY_RTOL * max(1.0, np.max(np.abs(a))):
            raise NonSymmetricError(
                f"matrix is not symmetric within tolerance (max skew {skew:.3e})"
            )
    if a.shape[0] == 0:
        return SymEig(np.zeros(0), np.zeros((0, 0)))
    try:
        w, q = np.linalg.eigh(0.5 * (a + a.T))
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    return SymEig(w, q)


def nullspace_sym_psd(a, rel_tol=NULLSPACE_RTOL):
    """Orthonormal kernel basis of a symmetric positive-semidefinite matrix.

    Returns the eigenvector columns whose eigenvalue is at most
    rel_tol * max(1, largest eigenvalue). May be empty (n x 0).
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    dec = sym_eig(a)
    if dec.eigenvalues.size == 0:
        return np.zeros((0, 0))
    lam_max = float(dec.eigenvalues[-1])
    cut = rel_tol * max(1.0, lam_max)
    if dec.eigenvalues[0] < -cut:
        raise NotPositiveDefiniteError(
            f"matrix is not PSD within tolerance (min eigenvalue {dec.eigenvalues[0]:.3e})"
        )
    keep = dec.eigenvalues <= cut
    return dec.eigenvectors[:, keep]


def solve_linear(a, b):
    """Solve a x = b by LU with partial pivoting.

    Raises SingularMatrixError when any pivot magnitude falls below
    1e-12 * max-entry of a.
    """
    a = _as_square(a)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(
            f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    floor = PIVOT_RTOL * max(1.0, np.max(np.abs(a)) if a.size else 0.0)
    if a.size and np.min(pivots) < floor:
        raise SingularMatrixError(
            f"pivot magnitude {np.min(pivots):.3e} below floor {floor:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), b)


def lyapunov_solve(a, q):
    """Solve a^T X + X a + q = 0 for symmetric q.

    Assembled as the n^2 x n^2 Kronecker linear system and solved by
    solve_linear, so a shared eigenvalue between a and -a^T surfaces as
    SingularMatrixError. The result is symmetrized exactly.
    """
    a = _as_square(a)
    q = _as_square(q, "q")
    n = a.shape[0]
    if q.shape[0] != n:
        raise DimensionMismatchError(f"q has shape {q.shape}, expected ({n}, {n})")
    eye = np.eye(n)
    m = np.kron(eye, a.T) + np.kron(a.T, eye)
    x = solve_linear(m, -q.flatten(order="F"))
    x = x.reshape((n, n), order="F")
    return 0.5 * (x + x.T)
