"""Constant contraction-metric certificates and sampled verification.

A certificate is a constant symmetric positive definite matrix P with a
control weighting rho and contraction rate mu. Only constant metrics
are representable; a state-dependent metric would need geodesic
machinery that is out of scope. Verification is by seeded sampling, not
global algebraic proof.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonSymmetricError, NotPositiveDefiniteError
from .linalg import sym_eig

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class MetricCertificate:
    p: np.ndarray
    rho: float
    mu: float
    p_lower: float
    p_upper: float

    @classmethod
    def from_matrix(cls, p, rho, mu):
        """Validate P and fill the eigenvalue bounds.

        Raises NonSymmetricError or NotPositiveDefiniteError when P is
        outside tolerance; mu must be positive, rho nonnegative (zero
        drops the input term from the contraction inequality).
        """
        p = np.asarray(p, dtype=float)
        if rho < 0.0 or mu <= 0.0:
            raise ValueError("rho must be nonnegative and mu positive")
        dec = sym_eig(p)
        p_lower = float(dec.eigenvalues[0])
        p_upper = float(dec.eigenvalues[-1])
        if p_lower <= 0.0:
            raise NotPositiveDefiniteError(
                f"metric matrix has min eigenvalue {p_lower:.3e}"
            )
        return cls(p=p, rho=float(rho), mu=float(mu),
                   p_lower=p_lower, p_upper=p_upper)


def verify_ari_sampled(cert, model, samples):
    """Worst-case margin of the contraction inequality on a sample set.

    At each state x the check is
        lambda_min( -[P J(x) + J(x)^T P - rho P g(x) g(x)^T P + 2 mu P] )
    with J the drift Jacobian; for a constant metric the directional
    derivative of P drops out of the Lie derivative. A nonnegative
    return means the inequality holds everywhere on the samples.
    """
    p = cert.p
    worst = np.inf
    for x in samples:
        x = np.asarray(x, dtype=float)
        jac = model.jac_f(x)
        gv = np.asarray(model.g(x), dtype=float).reshape(-1, 1)
        pg = p @ gv
        expr = p @ jac + jac.T @ p - cert.rho * (pg @ pg.T) + 2.0 * cert.mu * p
        margin = float(sym_eig(-expr).eigenvalues[0])
        worst = min(worst, margin)
    return worst


def verify_killing_integrability(cert, model, samples, fd_step=DEFAULT_FD_STEP):
    """Residuals of the metric-preservation and gradient conditions.

    killing_residual: max-norm of P dg/dx + (dg/dx)^T P over the samples
    (the directional-derivative term of a constant metric vanishes, so
    this is the whole expression; it is identically zero exactly when g
    is constant).

    integrability_residual: max-norm of grad(alpha)(x) - g(x)^T P with
    the gradient taken by central finite differences of step fd_step.
    """
    if fd_step <= 0.0:
        raise ValueError("fd_step must be positive")
    p = cert.p
    n = p.shape[0]
    killing = 0.0
    integr = 0.0
    for x in samples:
        x = np.asarray(x, dtype=float)
        dg = np.asarray(model.jac_g(x), dtype=float)
        expr = p @ dg + dg.T @ p
        if expr.size:
            killing = max(killing, float(np.max(np.abs(expr))))
        grad = np.empty(n)
        for i in range(n):
            step = np.zeros(n)
            step[i] = fd_step
            grad[i] = (model.alpha(x + step) - model.alpha(x - step)) / (2.0 * fd_step)
        target = (np.asarray(model.g(x), dtype=float) @ p).ravel()
        integr = max(integr, float(np.max(np.abs(grad - target))))
    return killing, integr
