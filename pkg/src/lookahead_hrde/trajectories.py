"""Closed-form mode solutions of the ``O(gamma)`` model on bilinear games.

After diagonalising ``A = U diag(lam) U^T`` each mode of the model obeys

    u'' + (2/gamma) u' + (1/gamma^2 - omega^2) u = forcing,
    omega^2 = 1/gamma^2 - alpha k (k-1) lam^2,

whose impulse response is ``g(t) = exp(-t/gamma) sinh(omega t) / omega``.
When ``omega^2 < 0`` the same function is evaluated through ``sin``.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidK, NotBilinear, NotSymmetric
from .games import operator_f
from .hrde import PhaseState, integrate_hrde
from .stability import companion_roots, la_bg_char_poly


@dataclass(frozen=True)
class ModeDecomposition:
    u_mat: np.ndarray
    lambdas: np.ndarray
    omegas: np.ndarray = None
    omega_sq: np.ndarray = None


@dataclass(frozen=True)
class KernelSample:
    t: float
    g_mat: np.ndarray


def eig_sym(a_mat, atol=1e-12):
    a = np.asarray(a_mat, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=atol * max(1.0, np.max(np.abs(a)))):
        raise NotSymmetric("matrix is not symmetric")
    lam, u = np.linalg.eigh(0.5 * (a + a.T))
    return ModeDecomposition(u[:, ::-1], lam[::-1])


def mode_frequencies(decomp, config):
    if config.k < 2:
        raise InvalidK("mode frequencies need k >= 2")
    lam = decomp.lambdas
    w2 = 1.0 / config.gamma**2 - config.alpha * config.k * (config.k - 1) * lam**2
    return replace(decomp, omegas=np.sqrt(w2.astype(complex)), omega_sq=w2)


def _damped_pair(omega_sq, gamma, t):
    """``exp(-t/gamma) * (cosh(w t), sinh(w t) / w)`` with ``w^2 = omega_sq``.

    Real arithmetic throughout: exponentials with non-positive rates for
    real ``w`` and ``cos``/``sin`` for imaginary ``w``.
    """
    t = np.asarray(t, dtype=float)
    w2 = np.asarray(omega_sq, dtype=float)
    decay = np.exp(-t / gamma)
    w = np.sqrt(np.abs(w2))
    wt = w * t
    real = w2 >= 0
    # exp(-t/g) cosh(wt) = exp((w - 1/g) t) (1 + exp(-2wt)) / 2, likewise for sinh.
    lead = np.exp((w - 1.0 / gamma) * t)
    cosh_r = 0.5 * lead * (1.0 + np.exp(-2.0 * wt))
    with np.errstate(divide="ignore", invalid="ignore"):
        sinhc_r = np.where(w > 0, lead * -np.expm1(-2.0 * wt) / (2.0 * np.where(w > 0, w, 1.0)), t * decay)
    cos_i = decay * np.cos(wt)
    sinc_i = decay * t * np.sinc(wt / np.pi)
    return np.where(real, cosh_r, cos_i), np.where(real, sinhc_r, sinc_i)


def _omega_sq(decomp):
    if decomp.omega_sq is None:
        raise ValueError("call mode_frequencies first")
    return decomp.omega_sq


def kernel_g(decomp, config, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    _, g = _damped_pair(_omega_sq(decomp), config.gamma, t)
    u = decomp.u_mat
    return KernelSample(float(t), (u * g) @ u.T)


def potential_closed_form(config, decomp, x0, v0, t):
    """Homogeneous mode solution
    ``exp(-t/gamma) [cosh(w t) x0 + sinh(w t)/w (v0 + x0/gamma)]`` per mode."""
    u = decomp.u_mat
    x0m = u.T @ np.asarray(x0, dtype=float)
    v0m = u.T @ np.asarray(v0, dtype=float)
    c, s = _damped_pair(_omega_sq(decomp), config.gamma, t)
    return u @ (c * x0m + s * (v0m + x0m / config.gamma))


def _trapz_conv(kernel, signal, h):
    # kernel[0] == 0, so only the j = 0 endpoint correction is needed.
    full = np.convolve(kernel, signal)[: len(signal)]
    return h * (full - 0.5 * kernel * signal[0])


def theorem2_residual(game, config, horizon, h, z0=None, v0=None):
    """Sup-norm gap between an RK4 solution of the ``O(gamma)`` model and the
    convolution formula evaluated on that same solution.

    The formula for ``x`` is ``-(2 k alpha / gamma) (G * A y) + homogeneous``
    and symmetrically for ``y`` with the opposite sign.  The convolution is
    the trapezoid rule on the step-``h`` grid.
    """
    if not game.is_bilinear:
        raise NotBilinear("the closed form is for bilinear games")
    n = game.half_dim
    z0 = np.ones(game.dim) if z0 is None else np.asarray(z0, dtype=float)
    v0 = -operator_f(game, z0) if v0 is None else np.asarray(v0, dtype=float)
    if not np.any(z0) and not np.any(v0):
        return 0.0
    traj = integrate_hrde(game, config, 1, PhaseState(z0, v0), horizon, h)
    dec = mode_frequencies(eig_sym(game.a_mat), config)
    u, lam = dec.u_mat, dec.lambdas
    c, s = _damped_pair(dec.omega_sq[None, :], config.gamma, traj.times[:, None])
    xm = traj.z[:, :n] @ u
    ym = traj.z[:, n:] @ u
    gain = 2 * config.k * config.alpha / config.gamma
    worst = 0.0
    for own, other, sign in ((xm, ym, -1.0), (ym, xm, 1.0)):
        own0 = own[0]
        vel0 = traj.v[0, :n] @ u if sign < 0 else traj.v[0, n:] @ u
        rhs = c * own0 + s * (vel0 + own0 / config.gamma)
        for i in range(n):
            rhs[:, i] += sign * gain * _trapz_conv(s[:, i], lam[i] * other[:, i], h)
        worst = max(worst, float(np.max(np.linalg.norm(own - rhs, axis=1))))
    return worst


def xtf_poles(lambda_i, config):
    return companion_roots(la_bg_char_poly(lambda_i, config))
