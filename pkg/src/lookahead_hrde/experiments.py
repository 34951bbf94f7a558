"""Experiment configuration and grid runners behind the command line."""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import conditions as cond
from .dynamics import LookaheadConfig, classify_trajectory, lookahead_run
from .errors import ConfigError, LookaheadError, Unsatisfiable
from .games import from_descriptor, make_quadratic, scalar_beta
from .stability import (
    companion_roots,
    dominant_pole,
    gd_char_poly,
    la2_gamma2_char_poly,
    la_bg_char_poly,
    la_qd_char_poly,
    routh_real,
)
from .trajectories import eig_sym

MODELS = ("gd", "la-bg", "la-qd", "la-gamma2")
DEFAULT_BETAS = tuple(round(0.05 * i, 2) for i in range(21))

PRESETS = {
    "fig2-left": {
        "game": ["bg:2"],
        "k": ["5"],
        "gamma": ["0.1"],
        "alpha": ["0.5", "0.8", "0.9"],
        "n_outer": ["200"],
        "conv_tol": ["1e-2"],
    },
    "fig2-right": {
        "game": ["potential:2"],
        "k": ["5"],
        "alpha": ["0.5"],
        "gamma": ["0.1", "0.25", "0.5"],
        "n_outer": ["50"],
        "conv_tol": ["1e-2"],
    },
    "fig3": {"k": ["5"], "alpha": ["0.5"], "n_outer": ["200"]},
}

_LIST_KEYS = {"k", "alpha", "gamma", "beta"}
_SCALAR_KEYS = {
    "game", "a_mat", "b_mat", "c_mat", "n_outer", "seed", "condition", "model",
    "variant", "conv_tol", "div_factor", "workers",
}


@dataclass
class ExperimentConfig:
    game: str = None
    matrices: dict = field(default_factory=dict)
    ks: list = field(default_factory=lambda: [5])
    alphas: list = field(default_factory=lambda: [0.5])
    gammas: list = field(default_factory=lambda: [0.1])
    betas: list = field(default_factory=list)
    n_outer: int = 200
    seed: int = None
    condition: str = None
    model: str = None
    variant: str = "derived"
    conv_tol: float = 1e-6
    div_factor: float = 1e3
    workers: int = 4

    def __post_init__(self):
        for name in ("ks", "alphas", "gammas"):
            if not getattr(self, name):
                raise ConfigError(f"grid {name} is empty")
        if self.n_outer < 1:
            raise ConfigError(f"n_outer must be >= 1, got {self.n_outer}")
        if any(not 0.0 <= b <= 1.0 for b in self.betas):
            raise ConfigError("beta values must lie in [0, 1]")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def build_game(self):
        if self.matrices:
            a = self.matrices.get("a_mat")
            if a is None:
                raise ConfigError("matrix games need a_mat")
            zero = np.zeros_like(a)
            try:
                return make_quadratic(
                    a, self.matrices.get("b_mat", zero), self.matrices.get("c_mat", zero), "custom"
                )
            except LookaheadError as exc:
                raise ConfigError(str(exc)) from exc
        if self.game is None:
            raise ConfigError("no game given (set game= or a_mat=)")
        try:
            return from_descriptor(self.game)
        except (ValueError, LookaheadError) as exc:
            raise ConfigError(str(exc)) from exc

    def cells(self):
        return list(itertools.product(self.ks, self.alphas, self.gammas))


def parse_matrix(text):
    """``"1 0; 0 1"`` -> 2x2 array (rows split on ``;``, entries on spaces or commas)."""
    rows = [r.replace(",", " ").split() for r in text.split(";") if r.strip()]
    try:
        mat = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise ConfigError(f"bad matrix literal {text!r}") from exc
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigError(f"matrix literal {text!r} is not square")
    return mat


def parse_config_text(text):
    """Flat ``key = value`` lines; repeated keys and comma lists build grids."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected key = value")
        if key not in _LIST_KEYS | _SCALAR_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _LIST_KEYS:
            raw.setdefault(key, []).extend(v.strip() for v in value.split(",") if v.strip())
        else:
            raw.setdefault(key, []).append(value)
    return raw


def build_config(raw, seed=None):
    def scalar(key, conv, default):
        vals = raw.get(key)
        if not vals:
            return default
        if len(vals) > 1:
            raise ConfigError(f"key {key!r} given more than once")
        try:
            return conv(vals[-1])
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {vals[-1]!r}") from exc

    def grid(key, conv, default):
        try:
            return [conv(v) for v in raw[key]] if key in raw else list(default)
        except ValueError as exc:
            raise ConfigError(f"bad value in grid {key!r}") from exc

    def as_int(v):
        f = float(v)
        if f != int(f):
            raise ValueError(v)
        return int(f)

    matrices = {m: parse_matrix(raw[m][-1]) for m in ("a_mat", "b_mat", "c_mat") if m in raw}
    cfg = ExperimentConfig(
        game=scalar("game", str, None),
        matrices=matrices,
        ks=grid("k", as_int, [5]),
        alphas=grid("alpha", float, [0.5]),
        gammas=grid("gamma", float, [0.1]),
        betas=grid("beta", float, []),
        n_outer=scalar("n_outer", as_int, 200),
        seed=seed if seed is not None else scalar("seed", as_int, None),
        condition=scalar("condition", str, None),
        model=scalar("model", str, None),
        variant=scalar("variant", str, "derived"),
        conv_tol=scalar("conv_tol", float, 1e-6),
        div_factor=scalar("div_factor", float, 1e3),
        workers=scalar("workers", as_int, 4),
    )
    return cfg


def _pool_map(fn, items, workers):
    # map() keeps input order, so the output rows follow the grid order.
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def initial_point(dim, seed=None):
    """All-ones start, or a seeded random point on the unit sphere."""
    if seed is None:
        return np.ones(dim)
    v = np.random.default_rng(seed).standard_normal(dim)
    return v / np.linalg.norm(v)


def on_bg_boundary(game, k, alpha):
    return game.is_bilinear and math.isclose(alpha, (k - 1) / k, rel_tol=0, abs_tol=1e-12)


@dataclass
class SimulationResult:
    run_id: int
    k: int
    alpha: float
    gamma: float
    record: object
    verdict: str
    boundary: bool


def simulate(cfg):
    game = cfg.build_game()
    z0 = initial_point(game.dim, cfg.seed)
    cells = cfg.cells()

    def run(item):
        idx, (k, alpha, gamma) = item
        lc = LookaheadConfig(k, alpha, gamma)
        rec = lookahead_run(game, z0, lc, cfg.n_outer)
        verdict = classify_trajectory(rec, cfg.conv_tol, cfg.div_factor)
        return SimulationResult(idx, k, alpha, gamma, rec, verdict.value, on_bg_boundary(game, k, alpha))

    for k, alpha, gamma in cells:
        LookaheadConfig(k, alpha, gamma)  # validate before dispatching
    return game, _pool_map(run, list(enumerate(cells)), cfg.workers)


def check(cfg):
    kind = cfg.condition
    try:
        kind = cond.ConditionKind(kind)
    except ValueError as exc:
        raise ConfigError(f"unknown condition kind {kind!r}") from exc
    for k, a, g in cfg.cells():
        LookaheadConfig(k, a, g)
    if kind is cond.ConditionKind.BG:
        cells = list(itertools.product(cfg.ks, cfg.alphas))
        return [cond.bg_condition(k, a) for k, a in cells]
    if kind is cond.ConditionKind.QD2 and min(cfg.ks) < 2:
        raise ConfigError("QD-Cond-2 needs k >= 2")
    betas = cfg.betas or ([None] if kind is cond.ConditionKind.QD else [])
    if not betas:
        raise ConfigError("QD-Cond-2 needs a beta grid")
    game = cfg.build_game() if betas == [None] else None
    rows = []
    for beta in betas:
        for k, a, g in cfg.cells():
            lc = LookaheadConfig(k, a, g)
            try:
                if kind is cond.ConditionKind.QD:
                    gm = game if beta is None else scalar_beta(beta)
                    rep = cond.qd_condition(gm, lc, cfg.variant)
                    if beta is not None:
                        rep = cond.ConditionReport(**{**rep.__dict__, "beta": beta})
                else:
                    rep = cond.qd_condition_gamma2(beta, lc, cfg.variant)
            except LookaheadError as exc:
                raise ConfigError(str(exc)) from exc
            rows.append(rep)
    return rows


@dataclass
class Fig3Row:
    beta: float
    condition: str
    gamma_star: float
    error: float


def fig3(cfg):
    betas = cfg.betas or list(DEFAULT_BETAS)
    if len(cfg.ks) != 1 or len(cfg.alphas) != 1:
        raise ConfigError("fig3 takes a single k and a single alpha")
    k, alpha = cfg.ks[0], cfg.alphas[0]
    LookaheadConfig(k, alpha, 1.0)
    if k < 2:
        raise ConfigError("fig3 needs k >= 2 for the O(gamma^2) condition")
    kinds = (cond.ConditionKind.QD, cond.ConditionKind.QD2)
    items = list(itertools.product(betas, kinds))

    def run(item):
        beta, kind = item
        try:
            g_star = cond.max_gamma(kind, beta, k, alpha, variant=cfg.variant)
        except Unsatisfiable:
            return Fig3Row(beta, kind.value, None, None)
        err = cond.condition_error(scalar_beta(beta), k, alpha, g_star, cfg.n_outer)
        return Fig3Row(beta, kind.value, g_star, err)

    return _pool_map(run, items, cfg.workers)


@dataclass
class PoleRow:
    model: str
    mode_index: int
    k: int
    alpha: float
    gamma: float
    dom: complex
    verdict: str


def _pole_row(model, idx, k, alpha, gamma, poly):
    verdict = routh_real(poly).verdict.value
    return PoleRow(model, idx, k, alpha, gamma, dominant_pole(companion_roots(poly)), verdict)


def poles(cfg):
    """Dominant pole and Routh verdict per (mode, k, alpha, gamma).

    For ``gd`` and ``la-bg`` the modes are the eigenvalues of ``A``; for
    ``la-qd`` and ``la-gamma2`` with a beta grid, ``mode_index`` is the
    position in that grid.
    """
    model = cfg.model
    if model not in MODELS:
        raise ConfigError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    rows = []
    if model in ("gd", "la-bg"):
        game = cfg.build_game()
        try:
            lams = eig_sym(game.a_mat).lambdas
        except LookaheadError as exc:
            raise ConfigError(f"{model} needs a symmetric A: {exc}") from exc
        for k, alpha, gamma in cfg.cells():
            lc = LookaheadConfig(k, alpha, gamma)
            for i, lam in enumerate(lams):
                if model == "gd":
                    poly = gd_char_poly(lam, gamma)
                else:
                    if k < 2:
                        raise ConfigError("la-bg needs k >= 2")
                    poly = la_bg_char_poly(lam, lc)
                rows.append(_pole_row(model, i, k, alpha, gamma, poly))
        return rows
    if model == "la-qd":
        games = (
            [scalar_beta(b) for b in cfg.betas] if cfg.betas else [cfg.build_game()]
        )
        for k, alpha, gamma in cfg.cells():
            lc = LookaheadConfig(k, alpha, gamma)
            for i, gm in enumerate(games):
                try:
                    sc = cond.qd_scalars(gm, lc, cfg.variant)
                except LookaheadError as exc:
                    raise ConfigError(str(exc)) from exc
                sign = -1.0 if cfg.variant == "derived" else 1.0
                poly = la_qd_char_poly(sc.m_x, sc.m_y, sc.l_x, sc.l_y, gamma, sign)
                rows.append(_pole_row(model, i, k, alpha, gamma, poly))
        return rows
    if not cfg.betas:
        raise ConfigError("la-gamma2 needs a beta grid")
    for k, alpha, gamma in cfg.cells():
        lc = LookaheadConfig(k, alpha, gamma)
        if k < 2:
            raise ConfigError("la-gamma2 needs k >= 2")
        for i, beta in enumerate(cfg.betas):
            t_val, l_val = cond.gamma2_tl(beta, lc, cfg.variant)
            rows.append(_pole_row(model, i, k, alpha, gamma, la2_gamma2_char_poly(t_val, l_val, gamma)))
    return rows
