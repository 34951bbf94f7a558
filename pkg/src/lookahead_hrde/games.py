"""Quadratic min-max games and their vector-field quantities.

A game is stored through the matrices of its operator

    F(x, y) = (C x + A y, -A^T x + B y),

the gradient field of ``<x, A y> + 1/2 <x, C x> - 1/2 <y, B y>`` with the
max player's sign flipped.  The equilibrium of every game handled here is
the origin.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPSD

PSD_TOL = 1e-10


def _frozen(mat):
    arr = np.array(mat, dtype=float, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GameSpec:
    a_mat: np.ndarray
    b_mat: np.ndarray
    c_mat: np.ndarray
    tag: str = "qd"

    @property
    def half_dim(self):
        return self.a_mat.shape[0]

    @property
    def dim(self):
        return 2 * self.half_dim

    @property
    def is_bilinear(self):
        return not (np.any(self.b_mat) or np.any(self.c_mat))

    @property
    def is_scalar(self):
        return self.half_dim == 1


@dataclass(frozen=True)
class JointPoint:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise DimensionMismatch(f"x {x.shape} and y {y.shape} must be equal-length vectors")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def z(self):
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_z(cls, z):
        z = np.asarray(z, dtype=float)
        if z.ndim != 1 or z.size % 2:
            raise DimensionMismatch(f"joint vector must have even length, got {z.shape}")
        h = z.size // 2
        return cls(z[:h], z[h:])


def make_quadratic(a_mat, b_mat, c_mat, tag="qd"):
    """Validate the blocks and build a :class:`GameSpec`.

    ``b_mat`` and ``c_mat`` must be symmetric PSD up to ``PSD_TOL``.
    """
    a, b, c = _frozen(a_mat), _frozen(b_mat), _frozen(c_mat)
    n = a.shape[0]
    for name, m in (("A", a), ("B", b), ("C", c)):
        if m.ndim != 2 or m.shape != (n, n):
            raise DimensionMismatch(f"{name} has shape {m.shape}, expected ({n}, {n})")
    for name, m in (("B", b), ("C", c)):
        if not np.allclose(m, m.T, atol=1e-12):
            raise NotPSD(name, float("nan"))
        lo = np.linalg.eigvalsh(m).min()
        if lo < -PSD_TOL:
            raise NotPSD(name, lo)
    return GameSpec(a, b, c, tag)


def bilinear(a_mat, tag="bg"):
    a = _frozen(a_mat)
    z = np.zeros_like(a)
    return make_quadratic(a, z, z, tag)


def scalar_beta(beta):
    """The one-dimensional game ``(1-b) x^2 + b x y - (1-b) y^2``.

    Its operator is ``(2(1-b) x + b y, -b x + 2(1-b) y)``.
    """
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    curv = 2.0 * (1.0 - beta)
    return make_quadratic([[beta]], [[curv]], [[curv]], tag=f"beta:{beta:g}")


def potential(half_dim=2):
    """Uncoupled game ``A = 0, B = C = I``, so that ``F(z) = z``."""
    eye = np.eye(half_dim)
    return make_quadratic(0 * eye, eye, eye, tag=f"potential:{half_dim}")


def from_descriptor(desc):
    """Build a game from a preset name.

    Accepted forms: ``bg``, ``qd``, ``potential`` (optionally suffixed
    ``:<half_dim>``, default 2) and ``beta:<value>``.
    """
    name, _, arg = desc.strip().partition(":")
    name = name.lower()
    if name == "beta":
        return scalar_beta(float(arg))
    n = int(arg) if arg else 2
    if n < 1:
        raise ValueError(f"half dimension must be positive in {desc!r}")
    eye = np.eye(n)
    if name == "bg":
        return bilinear(eye, tag=f"bg:{n}")
    if name == "qd":
        return make_quadratic(eye, eye, eye, tag=f"qd:{n}")
    if name == "potential":
        return potential(n)
    raise ValueError(f"unknown game preset {desc!r}")


def _split(game, p):
    if isinstance(p, JointPoint):
        x, y = p.x, p.y
    else:
        z = np.asarray(p, dtype=float)
        if z.shape != (game.dim,):
            raise DimensionMismatch(f"point has shape {z.shape}, game needs ({game.dim},)")
        x, y = z[: game.half_dim], z[game.half_dim :]
    if x.shape != (game.half_dim,):
        raise DimensionMismatch(f"point has half dimension {x.shape[0]}, game has {game.half_dim}")
    return x, y


def loss(game, p):
    x, y = _split(game, p)
    return x @ game.a_mat @ y + 0.5 * x @ game.c_mat @ x - 0.5 * y @ game.b_mat @ y


def operator_f(game, p):
    x, y = _split(game, p)
    return np.concatenate([game.c_mat @ x + game.a_mat @ y, -game.a_mat.T @ x + game.b_mat @ y])


def jacobian_f(game):
    a, b, c = game.a_mat, game.b_mat, game.c_mat
    return np.block([[c, a], [-a.T, b]])


def jf_product(game, p):
    """``J F(z)``, the first correction term of the high-resolution models."""
    return jacobian_f(game) @ operator_f(game, p)


def j2f_product(game, p):
    jac = jacobian_f(game)
    return jac @ (jac @ operator_f(game, p))


def hessian_contraction(game, p):
    # F is affine, so the Jacobian is constant and its derivative vanishes.
    _split(game, p)
    return np.zeros(game.dim)


def t_blocks(game):
    """Return ``(T_x, T_y, T'_x, T'_y)`` with ``F = T_x x + T_y y`` and
    ``J F = T'_x x + T'_y y``; each block is ``(2n, n)``."""
    n = game.half_dim
    jac = jacobian_f(game)
    jac2 = jac @ jac
    return jac[:, :n], jac[:, n:], jac2[:, :n], jac2[:, n:]
