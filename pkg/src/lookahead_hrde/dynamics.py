"""Deterministic GD and Lookahead-GDA on quadratic games."""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .games import JointPoint, operator_f

OVERFLOW_CAP = 1e300


@dataclass(frozen=True)
class LookaheadConfig:
    """Lookahead hyperparameters: ``k`` inner GD steps of size ``gamma``,
    then a step of weight ``alpha`` toward the predicted iterate."""

    k: int
    alpha: float
    gamma: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"k must be an integer >= 1, got {self.k}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.gamma > 0.0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "gamma", float(self.gamma))

    def replace(self, **changes):
        fields = {"k": self.k, "alpha": self.alpha, "gamma": self.gamma}
        fields.update(changes)
        return LookaheadConfig(**fields)


class Outcome(str, enum.Enum):
    CONVERGED = "Converged"
    DIVERGED = "Diverged"
    UNDECIDED = "Undecided"


@dataclass
class TrajectoryRecord:
    points: np.ndarray  # (n + 1, d) outer iterates, z0 first
    distances: np.ndarray
    config: LookaheadConfig
    game_tag: str = ""
    overflow: bool = False

    def point(self, i):
        return JointPoint.from_z(self.points[i])

    @property
    def initial_distance(self):
        return float(self.distances[0])

    @property
    def final_distance(self):
        if self.overflow:
            return OVERFLOW_CAP
        return float(self.distances[-1])


def _as_z(p):
    return p.z if isinstance(p, JointPoint) else np.array(p, dtype=float)


def gd_step(game, p, gamma):
    """One step ``z - gamma F(z)``; returns the same kind of point it was given."""
    if not gamma > 0:
        raise ConfigError(f"gamma must be positive, got {gamma}")
    z = _as_z(p)
    out = z - gamma * operator_f(game, z)
    return JointPoint.from_z(out) if isinstance(p, JointPoint) else out


def row_norms(points):
    """Euclidean norm of each row, scaled to avoid overflow near the cap."""
    points = np.atleast_2d(points)
    scale = np.max(np.abs(points), axis=1, keepdims=True)
    safe = np.where(scale > 0, scale, 1.0)
    return safe[:, 0] * np.linalg.norm(points / safe, axis=1)


def _blown_up(z):
    return not np.all(np.isfinite(z)) or np.max(np.abs(z)) > OVERFLOW_CAP


def gd_run(game, z0, gamma, n_steps):
    z = _as_z(z0)
    points = [z]
    overflow = False
    for _ in range(n_steps):
        z = gd_step(game, z, gamma)
        if _blown_up(z):
            overflow = True
            break
        points.append(z)
    points = np.array(points)
    cfg = LookaheadConfig(1, 1.0, gamma)
    return TrajectoryRecord(points, row_norms(points), cfg, game.tag, overflow)


def lookahead_run(game, z0, config, n_outer):
    """Run ``n_outer`` Lookahead steps from ``z0``.

    Each outer step takes ``k`` GD steps from the current iterate and moves
    a fraction ``alpha`` of the way to the result.  A coordinate above
    ``OVERFLOW_CAP`` stops the run and sets ``overflow``.
    """
    if n_outer < 1:
        raise ConfigError(f"n_outer must be >= 1, got {n_outer}")
    z = _as_z(z0)
    if z.shape != (game.dim,):
        z = JointPoint.from_z(z).z  # raises on odd length
        operator_f(game, z)
    k, alpha, gamma = config.k, config.alpha, config.gamma
    points = [z]
    overflow = False
    for _ in range(n_outer):
        fast = z
        for _ in range(k):
            fast = fast - gamma * operator_f(game, fast)
        z = z + alpha * (fast - z)
        if _blown_up(z):
            overflow = True
            break
        points.append(z)
    points = np.array(points)
    return TrajectoryRecord(points, row_norms(points), config, game.tag, overflow)


def classify_trajectory(record, conv_tol=1e-6, div_factor=1e3):
    if conv_tol <= 0 or div_factor <= 1:
        raise ConfigError("need conv_tol > 0 and div_factor > 1")
    first = record.initial_distance
    if record.overflow:
        return Outcome.DIVERGED
    last = record.final_distance
    if last < conv_tol * max(1.0, first):
        return Outcome.CONVERGED
    if last > div_factor * first:
        return Outcome.DIVERGED
    return Outcome.UNDECIDED
