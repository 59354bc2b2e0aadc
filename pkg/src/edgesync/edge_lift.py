"""Edge lift of the Laplacian and its endpoint correction.

For any weighted undirected graph there is a Q x Q matrix U with

    U E^T = E^T L          (the lift intertwines L with the edge algebra)
    W U + U^T W > 0        (positive definite symmetric part)

constructed as U = E^T E W + mu * sum_i v_i v_i^T over an orthonormal
basis {v_i} of ker(E). Trees have full column rank incidence, so U is
the edge Laplacian itself with mu = 0; cycles require a positive kernel
shift found by a doubling search. The endpoint correction Omega relates
the lift to the per-endpoint incidence splits.
"""

from dataclasses import dataclass

import numpy as np

from .errors import LiftSearchError
from .linalg import nullspace_sym_psd, sym_eig

MARGIN_FLOOR_RTOL = 1e-10
MAX_DOUBLINGS = 40
MAX_HALVINGS = 60


@dataclass(frozen=True)
class EdgeLift:
    """Constructed lift with its certificate quantities.

    pd_margin is the smallest eigenvalue of (W U + U^T W) / 2; kernel
    basis and mu reconstruct the lift exactly as
    edge_laplacian + mu * kernel_basis @ kernel_basis.T.
    """

    lift: np.ndarray
    mu: float
    omega: np.ndarray
    pd_margin: float
    kernel_dim: int
    kernel_basis: np.ndarray


def _symmetric_part_min_eig(weight_diag, candidate):
    s = 0.5 * (weight_diag @ candidate + candidate.T @ weight_diag)
    return float(sym_eig(s).eigenvalues[0])


def build_edge_lift(m):
    """Construct the edge lift for prepared graph matrices.

    The kernel shift mu starts at the smallest Laplacian eigenvalue above
    the rank tolerance (the algebraic connectivity when the graph is
    connected) and doubles until the symmetric part of W U clears a
    positive-definiteness floor. Strongly nonuniform weights can push the
    feasible window below the seed: on ker(E) the symmetric part grows
    like mu * V^T W^-1 V while the indefinite cross terms grow with mu,
    so small shifts always work but large ones may not. When doubling
    fails the search therefore halves downward from the seed. Exhausting
    both schedules raises LiftSearchError to flag a numerical defect.
    """
    q = m.edge_laplacian.shape[0]
    n = m.incidence.shape[0]
    if q == 0:
        return EdgeLift(
            lift=np.zeros((0, 0)),
            mu=0.0,
            omega=np.zeros((0, n)),
            pd_margin=np.inf,
            kernel_dim=0,
            kernel_basis=np.zeros((0, 0)),
        )
    gram = m.incidence.T @ m.incidence
    kernel = nullspace_sym_psd(gram)
    kdim = kernel.shape[1]
    if kdim == 0:
        lift = m.edge_laplacian.copy()
        mu = 0.0
        margin = _symmetric_part_min_eig(m.weight_diag, lift)
    else:
        lap_eigs = sym_eig(m.laplacian).eigenvalues
        lam_max = float(lap_eigs[-1])
        positive = lap_eigs[lap_eigs > 1e-9 * max(1.0, lam_max)]
        # a graph with edges always has a positive Laplacian eigenvalue
        mu0 = float(positive[0])
        w_max = float(np.max(np.diag(m.weight_diag)))
        floor = MARGIN_FLOOR_RTOL * w_max
        projector = kernel @ kernel.T
        lift = None
        exponents = list(range(MAX_DOUBLINGS + 1))
        exponents += [-j for j in range(1, MAX_HALVINGS + 1)]
        for j in exponents:
            mu_try = mu0 * (2.0 ** j)
            cand = m.edge_laplacian + mu_try * projector
            margin_try = _symmetric_part_min_eig(m.weight_diag, cand)
            if margin_try > floor:
                lift, mu, margin = cand, mu_try, margin_try
                break
        if lift is None:
            raise LiftSearchError(
                f"no shift within 2^-{MAX_HALVINGS}..2^{MAX_DOUBLINGS} of "
                f"{mu0:.3e} achieved a positive-definite symmetric part"
            )
    omega = endpoint_correction_matrix(m, lift)
    return EdgeLift(
        lift=lift,
        mu=mu,
        omega=omega,
        pd_margin=margin,
        kernel_dim=kdim,
        kernel_basis=kernel,
    )


def endpoint_correction_matrix(m, lift):
    """Omega = (|E^T| L - U |E^T|) / 2 with entrywise absolute value."""
    abs_et = np.abs(m.incidence.T)
    return 0.5 * (abs_et @ m.laplacian - lift @ abs_et)


def verify_endpoint_identities(m, u):
    """Max-norm residuals of both endpoint identities.

    Checks E_k^T L = U E_k^T + Omega and E_l^T L = U E_l^T + Omega;
    their difference is exactly the intertwining relation, so both
    residuals are round-off small for any valid lift.
    """

    def _residual(split):
        st = split.T
        r = st @ m.laplacian - (u.lift @ st + u.omega)
        return float(np.max(np.abs(r))) if r.size else 0.0

    return _residual(m.incidence_initial), _residual(m.incidence_terminal)
