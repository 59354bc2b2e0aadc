"""Agent dynamics: drift f, input field g, feedback primitive alpha.

All agents in a network share one model (homogeneous dynamics) with a
single scalar input channel. Built-in models: a linear pair, a
saturating-perturbation model whose certificate conditions hold exactly
(constant g, linear alpha, bounded Jacobian perturbation), and the
three-state convective loop with a state-dependent input field.

Single-state evaluators are defined through the batched ones so both
paths produce identical floating-point results.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError
from .riccati import solve_ari


@dataclass(frozen=True)
class AgentModel:
    """Evaluator bundle for one agent's dynamics.

    f, g, alpha, jac_f, jac_g act on a single state vector; f_all,
    g_all, alpha_all act on an (N, n) stack of states, one row per
    agent. The input is scalar (input_dim is fixed at 1).
    """

    name: str
    state_dim: int
    params: dict
    f: callable
    g: callable
    alpha: callable
    jac_f: callable
    jac_g: callable
    f_all: callable
    g_all: callable
    alpha_all: callable
    input_dim: int = 1


@dataclass(frozen=True)
class LinearFeedback:
    """Linear feedback primitive alpha(x) = k x with its design record."""

    gain: np.ndarray
    design: object = field(repr=False, default=None)

    def __call__(self, x):
        return float(self.gain @ np.asarray(x, dtype=float))


def _as_gain_row(k, n):
    k = np.asarray(k, dtype=float)
    if k.ndim == 2:
        if k.shape != (1, n):
            raise DimensionMismatchError(f"gain has shape {k.shape}, expected (1, {n})")
        k = k[0]
    if k.shape != (n,):
        raise DimensionMismatchError(f"gain has shape {k.shape}, expected ({n},)")
    return k


def _as_input_column(b, n):
    b = np.asarray(b, dtype=float)
    if b.ndim == 2:
        if b.shape[1] != 1:
            raise DimensionMismatchError(
                f"input matrix has {b.shape[1]} columns, input dimension is fixed at 1"
            )
        b = b[:, 0]
    if b.shape != (n,):
        raise DimensionMismatchError(f"input vector has shape {b.shape}, expected ({n},)")
    return b


def _model_from_batched(name, state_dim, params, f_all, g_all, alpha_all,
                        jac_f, jac_g):
    def f(x):
        return f_all(np.asarray(x, dtype=float)[None, :])[0]

    def g(x):
        return g_all(np.asarray(x, dtype=float)[None, :])[0]

    def alpha(x):
        return float(alpha_all(np.asarray(x, dtype=float)[None, :])[0])

    return AgentModel(
        name=name,
        state_dim=state_dim,
        params=params,
        f=f,
        g=g,
        alpha=alpha,
        jac_f=jac_f,
        jac_g=jac_g,
        f_all=f_all,
        g_all=g_all,
        alpha_all=alpha_all,
    )


def linear_model(a, b, k):
    """Linear agent: f(x) = A x, constant g = B, alpha(x) = K x."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"a must be square, got {a.shape}")
    n = a.shape[0]
    bv = _as_input_column(b, n)
    kv = _as_gain_row(k, n)
    zero = np.zeros((n, n))

    def f_all(xs):
        return xs @ a.T

    def g_all(xs):
        return np.broadcast_to(bv, (xs.shape[0], n)).copy()

    def alpha_all(xs):
        return xs @ kv

    return _model_from_batched(
        "linear", n, {"a": a, "b": bv, "k": kv},
        f_all, g_all, alpha_all,
        jac_f=lambda x: a,
        jac_g=lambda x: zero,
    )


def tanh_perturbed_model(a, b, gamma, k):
    """Linear drift plus a saturating componentwise perturbation.

    f(x) = A x + gamma * tanh(x), g = B constant, alpha(x) = K x. The
    Jacobian is A + gamma * diag(sech^2), so the drift never leaves the
    gamma-ball around A: every certificate condition stays checkable by
    a single sampled bound.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"a must be square, got {a.shape}")
    if gamma < 0.0:
        raise ValueError("gamma must be nonnegative")
    n = a.shape[0]
    bv = _as_input_column(b, n)
    kv = _as_gain_row(k, n)
    gamma = float(gamma)
    zero = np.zeros((n, n))

    def f_all(xs):
        return xs @ a.T + gamma * np.tanh(xs)

    def g_all(xs):
        return np.broadcast_to(bv, (xs.shape[0], n)).copy()

    def alpha_all(xs):
        return xs @ kv

    def jac_f(x):
        sech2 = 1.0 / np.cosh(np.asarray(x, dtype=float)) ** 2
        return a + gamma * np.diag(sech2)

    return _model_from_batched(
        "tanh_perturbed", n, {"a": a, "b": bv, "k": kv, "gamma": gamma},
        f_all, g_all, alpha_all,
        jac_f=jac_f,
        jac_g=lambda x: zero,
    )


def convective_linearization(a, b, c):
    """Origin linearization of the convective-loop drift and input field."""
    a_lin = np.array([[-a, a, 0.0], [b, -1.0, 0.0], [0.0, 0.0, -c]])
    b_lin = np.array([1.0, 2.0, 0.0])
    return a_lin, b_lin


def default_lorenz_alpha(rho, mu, a=10.0, b=8.0 / 3.0, c=28.0):
    """Reproducible linear stand-in for a learned feedback primitive.

    Linearizes the drift at the origin, freezes g at its origin value,
    runs the Riccati design there and returns alpha(x) = (B^T P) x. The
    attached certificate is only exact for the linearization; callers
    treating the nonlinear system should flag it as approximate.
    """
    a_lin, b_lin = convective_linearization(a, b, c)
    design = solve_ari(a_lin, b_lin, rho, mu)
    return LinearFeedback(gain=design.gain[0], design=design)


def lorenz_model(a=10.0, b=8.0 / 3.0, c=28.0, alpha=None, rho=10.0, mu=0.5):
    """Three-state convective loop with a state-dependent input field.

        f(x) = ( a (x2 - x1),  x1 (b - x3) - x2,  x1 x2 - c x3 )
        g(x) = ( 1,  2 + sin(x1),  0 )

    Defaults follow the source experiment's parameter listing verbatim;
    note the chaotic regime for this drift layout is b=28, c=8/3, which
    the shipped network scenario selects explicitly. When alpha is
    omitted a linearization-based feedback with weighting rho and rate
    mu is constructed.
    """
    a, b, c = float(a), float(b), float(c)
    if alpha is None:
        alpha = default_lorenz_alpha(rho, mu, a, b, c)

    def f_all(xs):
        x1, x2, x3 = xs[:, 0], xs[:, 1], xs[:, 2]
        return np.column_stack((a * (x2 - x1), x1 * (b - x3) - x2, x1 * x2 - c * x3))

    def g_all(xs):
        n_rows = xs.shape[0]
        return np.column_stack((
            np.ones(n_rows),
            2.0 + np.sin(xs[:, 0]),
            np.zeros(n_rows),
        ))

    if isinstance(alpha, LinearFeedback):
        gain = alpha.gain

        def alpha_all(xs):
            return xs @ gain
    else:
        def alpha_all(xs):
            return np.array([float(alpha(x)) for x in xs])

    def jac_f(x):
        x1, x2, x3 = x
        return np.array([
            [-a, a, 0.0],
            [b - x3, -1.0, -x1],
            [x2, x1, -c],
        ])

    def jac_g(x):
        out = np.zeros((3, 3))
        out[1, 0] = np.cos(x[0])
        return out

    def f(x):
        return f_all(np.asarray(x, dtype=float)[None, :])[0]

    def g(x):
        return g_all(np.asarray(x, dtype=float)[None, :])[0]

    return AgentModel(
        name="lorenz",
        state_dim=3,
        params={"a": a, "b": b, "c": c},
        f=f,
        g=g,
        alpha=alpha,
        jac_f=jac_f,
        jac_g=jac_g,
        f_all=f_all,
        g_all=g_all,
        alpha_all=alpha_all,
    )
