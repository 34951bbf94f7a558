"""Lookahead-GDA on quadratic min-max games: discrete runs, high-resolution
ODE models, pole and Routh-Hurwitz analysis, and convergence conditions."""

from .conditions import (
    ConditionKind,
    ConditionReport,
    bg_condition,
    condition_error,
    gamma2_tl,
    max_gamma,
    qd_condition,
    qd_condition_gamma2,
    qd_scalars,
)
from .dynamics import LookaheadConfig, Outcome, TrajectoryRecord, classify_trajectory, gd_step, lookahead_run
from .games import GameSpec, JointPoint, bilinear, make_quadratic, operator_f, potential, scalar_beta
from .hrde import PhaseState, hrde_coefficients, integrate_hrde
from .stability import Verdict, companion_roots, routh_real

__all__ = [
    "ConditionKind", "ConditionReport", "GameSpec", "JointPoint", "LookaheadConfig", "Outcome",
    "PhaseState", "TrajectoryRecord", "Verdict", "bg_condition", "bilinear", "classify_trajectory",
    "companion_roots", "condition_error", "gamma2_tl", "gd_step", "hrde_coefficients",
    "integrate_hrde", "lookahead_run", "make_quadratic", "max_gamma", "operator_f", "potential",
    "qd_condition", "qd_condition_gamma2", "qd_scalars", "routh_real", "scalar_beta",
]
