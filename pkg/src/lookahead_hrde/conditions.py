"""Convergence conditions for Lookahead-GDA and the step-size tools built on them.

Three conditions are provided:

* ``BG-Cond``: ``alpha < (k-1)/k`` on bilinear games, independent of ``gamma``.
* ``QD-Cond``: the ``O(gamma)`` condition on scalar quadratic games, written
  through four scalars ``m_x, m_y, l_x, l_y``.
* ``QD-Cond-2``: the ``O(gamma^2)`` Routh conditions on the scalar
  ``beta`` game.

The ``QD`` functions take ``variant="derived"`` (default) or
``variant="printed"``.  The derived variant uses the ``JF F`` weight
``k(k-1)/2`` of the first-order model and the determinant sign of the
coupled scalar system; the printed variant keeps the alternative
coefficients for comparison.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .dynamics import OVERFLOW_CAP, LookaheadConfig, lookahead_run
from .errors import ConfigError, InvalidK, NotScalarGame, Unsatisfiable
from .games import jacobian_f, scalar_beta
from .hrde import hrde_coefficients
from .stability import la2_gamma2_char_poly, routh_first_column

GAMMA_FLOOR = 1e-6
GAMMA_CAP = 2.0
VARIANTS = ("derived", "printed")


class ConditionKind(str, enum.Enum):
    BG = "BG-Cond"
    QD = "QD-Cond"
    QD2 = "QD-Cond-2"


@dataclass(frozen=True)
class ConditionReport:
    kind: ConditionKind
    satisfied: bool
    margin: float
    k: int
    alpha: float
    gamma: float = None
    game: str = ""
    beta: float = None

    def to_row(self):
        def fmt(v):
            return "" if v is None else repr(float(v))

        return {
            "kind": self.kind.value,
            "k": str(self.k),
            "alpha": fmt(self.alpha),
            "gamma": fmt(self.gamma),
            "beta": fmt(self.beta),
            "margin": fmt(self.margin),
            "satisfied": "true" if self.satisfied else "false",
        }


@dataclass(frozen=True)
class QdScalars:
    m_x: float
    m_y: float
    l_x: float
    l_y: float


def _variant(variant):
    if variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def bg_condition(k, alpha):
    if int(k) != k or k < 1:
        raise ConfigError(f"k must be an integer >= 1, got {k}")
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
    margin = (k - 1) / k - alpha
    return ConditionReport(ConditionKind.BG, margin > 0, margin, int(k), float(alpha))


def qd_scalars(game, config, variant="derived"):
    """Project the operator blocks of a scalar game onto ``m_x, m_y, l_x, l_y``."""
    if not game.is_scalar:
        raise NotScalarGame(f"needs a scalar game, got half dimension {game.half_dim}")
    jac = jacobian_f(game)
    jac2 = jac @ jac
    t_x, t_y = jac[:, 0], jac[:, 1]
    tp_x, tp_y = jac2[:, 0], jac2[:, 1]
    k, al, g = config.k, config.alpha, config.gamma
    c = hrde_coefficients(k, 1).c_jf if _variant(variant) == "derived" else k * (k - 1)
    return QdScalars(
        m_x=float(k * al * t_x[0] - c * al * g * tp_x[0]),
        m_y=float(k * al * t_y[1] - c * al * g * tp_y[1]),
        l_x=float(-k * al * t_y[0] + c * al * g * tp_y[0]),
        l_y=float(-k * al * t_x[1] + c * al * g * tp_x[1]),
    )


def qd_margin(sc, gamma, variant="derived"):
    sign = 1.0 if _variant(variant) == "derived" else -1.0
    return gamma * (sc.m_x - sc.m_y) ** 2 + 4 * (sc.m_x + sc.m_y) + sign * 4 * sc.l_x * sc.l_y * gamma


def qd_condition(game, config, variant="derived"):
    sc = qd_scalars(game, config, variant)
    margin = float(qd_margin(sc, config.gamma, variant))
    return ConditionReport(
        ConditionKind.QD, margin > 0, margin, config.k, config.alpha, config.gamma, game.tag
    )


def gamma2_tl(beta_mix, config, variant="derived"):
    """Scalars ``(T, L)`` of the ``O(gamma^2)`` characteristic equation on the
    ``beta`` game.

    With ``mu = 2(1-beta) + i beta`` (an eigenvalue of the Jacobian),
    ``T - iL = alpha (k mu - c_jf gamma mu^2 + c_j2f gamma^2 mu^3)``.  The
    ``printed`` variant flips the sign of the middle term of ``L``.
    """
    if not 0.0 <= beta_mix <= 1.0:
        raise ConfigError(f"beta must lie in [0, 1], got {beta_mix}")
    k, al, g = config.k, config.alpha, config.gamma
    if k < 2:
        raise InvalidK(f"the O(gamma^2) condition needs k >= 2, got {k}")
    b, nb = beta_mix, 1.0 - beta_mix
    c2 = (k - 2) ** 2
    t_val = (
        2 * al * k * nb
        - 2 * al * k * (k - 1) * g * nb**2
        + al * (k * (k - 1) / 2) * g * b**2
        + 8 * al * c2 * g**2 * nb**3
        - 6 * al * c2 * g**2 * b**2 * nb
    )
    mid = 2 * al * k * (k - 1) * g * b * nb
    if _variant(variant) == "printed":
        mid = -mid
    l_val = -al * b * k + mid - al * c2 * g**2 * (4 * b * nb**2 - b**3 + 8 * b * nb**2)
    return float(t_val), float(l_val)


def gamma2_first_column(beta_mix, config, variant="derived"):
    """Routh entries ``b1, c1, d1, e1, f1`` and the row-scaled margin."""
    poly = la2_gamma2_char_poly(*gamma2_tl(beta_mix, config, variant), config.gamma)
    rows, first = routh_first_column(poly)
    scaled = []
    for i in range(2, 7):
        if i >= len(first):
            scaled.append(0.0)  # recurrence hit an exact zero pivot
            continue
        norm = np.max(np.abs(rows[i]))
        scaled.append(first[i] / norm if norm > 0 else 0.0)
    return first[2:], min(scaled)


def qd_condition_gamma2(beta_mix, config, variant="derived"):
    first, margin = gamma2_first_column(beta_mix, config, variant)
    ok = len(first) == 5 and bool(np.all(first > 0))
    return ConditionReport(
        ConditionKind.QD2,
        ok,
        float(margin),
        config.k,
        config.alpha,
        config.gamma,
        f"beta:{beta_mix:g}",
        float(beta_mix),
    )


def _evaluator(kind, game_or_beta, k, alpha, variant):
    kind = ConditionKind(kind)
    if kind is ConditionKind.BG:
        return lambda g: bg_condition(k, alpha).satisfied
    if kind is ConditionKind.QD:
        game = scalar_beta(game_or_beta) if np.isscalar(game_or_beta) else game_or_beta
        return lambda g: qd_condition(game, LookaheadConfig(k, alpha, g), variant).satisfied
    beta = float(game_or_beta)
    return lambda g: qd_condition_gamma2(beta, LookaheadConfig(k, alpha, g), variant).satisfied


def max_gamma(kind, game_or_beta, k, alpha, gamma_cap=GAMMA_CAP, variant="derived", n_scan=2000):
    """Largest step size below the first violation of the condition.

    A log-spaced scan from ``1e-6`` to ``gamma_cap`` locates the first
    violating step size, then bisection narrows the boundary to a relative
    width of ``1e-6``.  ``QD-Cond`` accepts a game or a ``beta`` value;
    ``QD-Cond-2`` needs ``beta``.
    """
    ok = _evaluator(kind, game_or_beta, k, alpha, variant)
    if not ok(GAMMA_FLOOR):
        raise Unsatisfiable(f"{ConditionKind(kind).value} fails at gamma={GAMMA_FLOOR:g}")
    grid = np.geomspace(GAMMA_FLOOR, gamma_cap, n_scan)
    lo = GAMMA_FLOOR
    for g in grid[1:]:
        if not ok(g):
            hi = g
            break
        lo = g
    else:
        return float(gamma_cap)
    while hi - lo > 1e-6 * lo:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return float(lo)


def _final_distance(rec):
    return OVERFLOW_CAP if rec.overflow else min(rec.final_distance, OVERFLOW_CAP)


def condition_error(game, k, alpha, gamma_star, n_outer=200, z0=None, ratio=1.5):
    """``d(gamma_star) - d(ratio * gamma_star)`` after ``n_outer`` Lookahead steps.

    Negative values mean the condition-selected step size ends closer to
    the equilibrium.  Divergent runs saturate at ``OVERFLOW_CAP``.
    """
    if not gamma_star > 0:
        raise ConfigError(f"gamma_star must be positive, got {gamma_star}")
    z0 = np.ones(game.dim) if z0 is None else np.asarray(z0, dtype=float)
    d_star = _final_distance(lookahead_run(game, z0, LookaheadConfig(k, alpha, gamma_star), n_outer))
    d_alt = _final_distance(
        lookahead_run(game, z0, LookaheadConfig(k, alpha, ratio * gamma_star), n_outer)
    )
    return float(d_star - d_alt)
