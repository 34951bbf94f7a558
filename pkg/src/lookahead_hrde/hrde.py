"""High-resolution ODE surrogates of Lookahead-GDA.

The first-order model (terms up to ``O(gamma)``) is the second-order ODE

    z'' = -(2/gamma) z' - (2 k alpha / gamma) F + 2 alpha c_jf JF F

and the second-order model keeps ``O(gamma^2)`` terms, giving a third-order
ODE in ``z``.  Both are integrated in phase space with classical RK4.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import OVERFLOW_CAP, LookaheadConfig, lookahead_run
from .errors import ConfigError, DimensionMismatch, InvalidOrder
from .games import hessian_contraction, jacobian_f, operator_f


@dataclass(frozen=True)
class HrdeCoeffs:
    k: int
    c_f: float
    c_jf: float
    c_fhf: float
    c_j2f: float
    order: int


def hrde_coefficients(k, order):
    """Per-``k`` weights of ``F``, ``JF F``, ``F^T H F`` and ``J^2 F``.

    ``c_jf`` is ``sum(i, i < k)``, ``c_fhf`` is half of ``sum(i^2, i < k)``
    and ``c_j2f`` is ``(k - 2)^2``.  The second-order model is only defined
    for ``k >= 2``.
    """
    if order not in (1, 2):
        raise InvalidOrder(f"order must be 1 or 2, got {order}")
    if int(k) != k or k < 1:
        raise ConfigError(f"k must be an integer >= 1, got {k}")
    k = int(k)
    c_jf = k * (k - 1) / 2
    if order == 1:
        return HrdeCoeffs(k, float(k), c_jf, 0.0, 0.0, 1)
    if k < 2:
        raise InvalidOrder("the O(gamma^2) model needs k >= 2")
    c_fhf = k * (k - 1) * (2 * k - 1) / 12
    return HrdeCoeffs(k, float(k), c_jf, c_fhf, float((k - 2) ** 2), 2)


@dataclass(frozen=True)
class PhaseState:
    z: np.ndarray
    v: np.ndarray
    a: np.ndarray = None

    @property
    def order(self):
        return 1 if self.a is None else 2

    def flat(self):
        parts = [self.z, self.v] if self.a is None else [self.z, self.v, self.a]
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, y, order):
        d = y.size // (order + 1)
        if order == 1:
            return cls(y[:d], y[d:])
        return cls(y[:d], y[d : 2 * d], y[2 * d :])


@dataclass
class ContinuousTrajectory:
    times: np.ndarray
    z: np.ndarray  # (n_samples, d)
    v: np.ndarray
    a: np.ndarray = None
    overflow: bool = False

    @property
    def distances(self):
        return np.linalg.norm(self.z, axis=1)


def _check(game, state, order):
    if state.order != order:
        raise DimensionMismatch(f"order-{order} model got an order-{state.order} state")
    for name in ("z", "v", "a")[: order + 1]:
        if np.shape(getattr(state, name)) != (game.dim,):
            raise DimensionMismatch(f"state.{name} must have length {game.dim}")


def hrde_rhs_order1(game, config, state):
    _check(game, state, 1)
    co = hrde_coefficients(config.k, 1)
    f = operator_f(game, state.z)
    acc = (
        -(2.0 / config.gamma) * state.v
        - (2.0 * co.c_f * config.alpha / config.gamma) * f
        + 2.0 * config.alpha * co.c_jf * (jacobian_f(game) @ f)
    )
    return PhaseState(state.v, acc)


def hrde_rhs_order2(game, config, state):
    _check(game, state, 2)
    co = hrde_coefficients(config.k, 2)
    g = config.gamma
    f = operator_f(game, state.z)
    jac = jacobian_f(game)
    jf = jac @ f
    drive = (
        -co.c_f * f
        + co.c_jf * g * jf
        - co.c_fhf * g**2 * hessian_contraction(game, state.z)
        - co.c_j2f * g**2 * (jac @ jf)
    )
    jerk = (6.0 / g**2) * (config.alpha * drive - state.v - 0.5 * g * state.a)
    return PhaseState(state.v, state.a, jerk)


def default_init(game, z0, order):
    """Start at rest relative to the flow: ``v0 = -F(z0)`` and ``a0 = 0``."""
    z0 = np.asarray(z0, dtype=float)
    v0 = -operator_f(game, z0)
    if order == 1:
        return PhaseState(z0, v0)
    return PhaseState(z0, v0, np.zeros_like(z0))


def rk4(fun, y0, h, n_steps, cap=OVERFLOW_CAP):
    """Fixed-step classical RK4 for ``y' = fun(y)``.

    Returns ``(samples, overflow)``; integration stops once a component
    exceeds ``cap``.
    """
    y = np.asarray(y0, dtype=float)
    out = [y]
    for _ in range(n_steps):
        k1 = fun(y)
        k2 = fun(y + 0.5 * h * k1)
        k3 = fun(y + 0.5 * h * k2)
        k4 = fun(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > cap:
            return np.array(out), True
        out.append(y)
    return np.array(out), False


def hrde_phase_matrix(game, config, order):
    """Constant matrix ``M`` with ``d/dt state = M state`` for the chosen model."""
    d = game.dim
    jac = jacobian_f(game)
    eye, zero = np.eye(d), np.zeros((d, d))
    co = hrde_coefficients(config.k, order)
    al, g = config.alpha, config.gamma
    if order == 1:
        acc = -(2 * co.c_f * al / g) * jac + 2 * al * co.c_jf * jac @ jac
        return np.block([[zero, eye], [acc, -(2 / g) * eye]])
    drive = -co.c_f * jac + co.c_jf * g * jac @ jac - co.c_j2f * g**2 * jac @ jac @ jac
    return np.block(
        [
            [zero, eye, zero],
            [zero, zero, eye],
            [(6 / g**2) * al * drive, -(6 / g**2) * eye, -(3 / g) * eye],
        ]
    )


def integrate_hrde(game, config, order, init, t_end, h=None):
    """Integrate the chosen model from ``init`` up to ``t_end``.

    ``h`` defaults to ``gamma / 50``.  The run covers ``round(t_end / h)``
    steps, so the last sample may differ from ``t_end`` by under ``h / 2``.
    """
    if not isinstance(config, LookaheadConfig):
        raise ConfigError("config must be a LookaheadConfig")
    if h is None:
        h = config.gamma / 50
    if not h > 0 or t_end < h:
        raise ConfigError(f"need h > 0 and t_end >= h, got h={h}, t_end={t_end}")
    if init.order != order:
        raise DimensionMismatch(f"order-{order} model got an order-{init.order} state")
    hrde_coefficients(config.k, order)
    _check(game, init, order)
    # The flows are linear, so integrate the phase-space matrix directly.
    mat = hrde_phase_matrix(game, config, order)
    n_steps = int(round(t_end / h))
    ys, overflow = rk4(lambda y: mat @ y, init.flat(), h, n_steps)
    d = game.dim
    times = h * np.arange(ys.shape[0])
    a = ys[:, 2 * d :] if order == 2 else None
    return ContinuousTrajectory(times, ys[:, :d], ys[:, d : 2 * d], a, overflow)


def discrete_gap(game, config, z0, n_outer, order=1, substeps=50):
    """Largest coordinate gap between Lookahead iterates ``z_n`` and the
    model solution sampled at ``t = n gamma``, for ``n <= n_outer``."""
    rec = lookahead_run(game, z0, config, n_outer)
    h = config.gamma / substeps
    traj = integrate_hrde(game, config, order, default_init(game, z0, order), n_outer * config.gamma, h)
    samples = traj.z[::substeps][: len(rec.points)]
    return float(np.max(np.abs(samples - rec.points[: len(samples)])))
