"""Experiment drivers: interval-invariance sweep of the two dense formulas,
certification table over the second-order family, and convergence studies."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import registry
from .certify import check_xineq, dense_ssp_coefficient, ssp_coefficient
from .construct import family_tableau, first_order_weights, second_order_weights
from .errors import InvalidStepSizeError
from .integrate import convergence_study, dense_eval_grid, integrate_fixed
from .problems import sinode
from .tableau import validate_tableau

CSV_HEADER = "u0,t,theta,u,formula"


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class Figure1Summary:
    h: float
    n_steps: int
    ssp_min: float
    ssp_max: float
    nonssp_min: float
    nonssp_max: float
    nonssp_argmin: tuple[float, float]  # (u0, t) of the most negative value
    ssp_contained: bool

    def as_record(self) -> dict:
        return {
            "h": self.h,
            "n_steps": self.n_steps,
            "ssp": {"min": self.ssp_min, "max": self.ssp_max},
            "nonssp": {
                "min": self.nonssp_min,
                "max": self.nonssp_max,
                "argmin": {"u0": self.nonssp_argmin[0], "t": self.nonssp_argmin[1]},
            },
            "ssp_contained": self.ssp_contained,
        }


def run_figure1(
    h: float = 1.6,
    out_dir: str | None = None,
    n_u0: int = 101,
    n_theta: int = 101,
    n_steps: int = 7,
    containment_tol: float = 1e-12,
) -> Figure1Summary:
    """Integrate the three-stage method over a grid of initial values in [0,1]
    and evaluate both dense formulas on a theta grid.

    The SSP formula must keep every dense value inside [0,1] up to
    containment_tol for h up to twice the forward-Euler bound; the second
    formula is second-order accurate but not SSP and is expected to escape.
    Writes ssp.csv and nonssp.csv (columns u0,t,theta,u,formula) when out_dir
    is given; output is deterministic, so reruns are byte-identical.
    """
    if h <= 0:
        raise InvalidStepSizeError(f"step size must be positive, got {h}")
    entry = registry.get("numexample-322")
    weight_sets = {
        "ssp": entry.dense_weights,
        "nonssp": registry.nonssp_weights_322(),
    }
    u0s = np.linspace(0.0, 1.0, n_u0)
    thetas = np.linspace(0.0, 1.0, n_theta)
    problem = sinode(dimension=n_u0)
    traj = integrate_fixed(entry.tableau, problem, u0s, 0.0, h, n_steps)

    writers = {}
    handles = []
    try:
        if out_dir is not None:
            os.makedirs(out_dir, exist_ok=True)
            for formula in weight_sets:
                handle = open(
                    os.path.join(out_dir, f"{formula}.csv"), "w", encoding="utf-8"
                )
                handle.write(CSV_HEADER + "\n")
                writers[formula] = handle
                handles.append(handle)
        stats = {f: {"min": np.inf, "max": -np.inf, "argmin": (0.0, 0.0)} for f in weight_sets}
        for n in range(n_steps):
            for formula, weights in weight_sets.items():
                values = dense_eval_grid(traj, weights, n, thetas)  # (theta, u0)
                st = stats[formula]
                lo = float(values.min())
                if lo < st["min"]:
                    st["min"] = lo
                    it, iu = np.unravel_index(np.argmin(values), values.shape)
                    st["argmin"] = (float(u0s[iu]), float((n + thetas[it]) * h))
                st["max"] = max(st["max"], float(values.max()))
                if formula in writers:
                    handle = writers[formula]
                    for it, theta in enumerate(thetas):
                        t = (n + theta) * h
                        for iu, u0 in enumerate(u0s):
                            handle.write(
                                f"{_fmt(u0)},{_fmt(t)},{_fmt(theta)},"
                                f"{_fmt(values[it, iu])},{formula}\n"
                            )
    finally:
        for handle in handles:
            handle.close()

    ssp, non = stats["ssp"], stats["nonssp"]
    contained = (
        ssp["min"] >= -containment_tol and ssp["max"] <= 1.0 + containment_tol
    )
    return Figure1Summary(
        h=h,
        n_steps=n_steps,
        ssp_min=ssp["min"],
        ssp_max=ssp["max"],
        nonssp_min=non["min"],
        nonssp_max=non["max"],
        nonssp_argmin=non["argmin"],
        ssp_contained=contained,
    )


@dataclass(frozen=True)
class SweepRow:
    s: int
    c_method: float
    gamma: float
    xineq_holds: bool
    c_dense: float

    def as_record(self) -> dict:
        return {
            "s": self.s,
            "c_method": self.c_method,
            "gamma": self.gamma,
            "xineq_holds": self.xineq_holds,
            "c_dense": self.c_dense,
        }


def run_certification_sweep(s_max: int, tol: float = 1e-10) -> list[SweepRow]:
    """Certify the s-stage family members for s = 2..s_max: method coefficient,
    budget-inequality verdict, and the dense coefficient of the quadratic
    recipe.  The budget inequality holds through s = 4 and fails from s = 5 on,
    which is exactly where the quadratic recipe stops keeping the full
    coefficient."""
    if s_max < 2:
        raise ValueError("s_max must be at least 2")
    rows = []
    for s in range(2, s_max + 1):
        tab = family_tableau(s)
        c_method = ssp_coefficient(tab, tol)
        xineq = check_xineq(tab, r=c_method)
        weights = second_order_weights(tab)
        c_dense = dense_ssp_coefficient(tab, weights, tol)
        rows.append(
            SweepRow(
                s=s,
                c_method=c_method,
                gamma=xineq.lhs,
                xineq_holds=xineq.holds,
                c_dense=c_dense,
            )
        )
    return rows


@dataclass(frozen=True)
class ConvergenceRow:
    label: str
    step_slope: float
    dense_slope: float | None
    hs: tuple[float, ...]
    step_errors: tuple[float, ...]
    dense_errors: tuple[float, ...] | None

    def as_record(self) -> dict:
        return {
            "label": self.label,
            "step_slope": self.step_slope,
            "dense_slope": self.dense_slope,
            "hs": list(self.hs),
            "step_errors": list(self.step_errors),
            "dense_errors": None
            if self.dense_errors is None
            else list(self.dense_errors),
        }


STUDY_HS = (0.2, 0.1, 0.05, 0.025)
STUDY_U0 = 0.5
STUDY_T_END = 2.0


def run_convergence_tables(
    hs=STUDY_HS, u0: float = STUDY_U0, t_end: float = STUDY_T_END
) -> list[ConvergenceRow]:
    """Three standard studies on the oscillating logistic problem:

    - three-stage second-order method with its quadratic dense weights
      (dense slope ~2),
    - forward Euler with linear dense weights (dense slope ~1),
    - SSP(3,3,2) step points (slope ~3).
    """
    problem = sinode()
    fe = validate_tableau([[0]], [1], name="euler")
    entry322 = registry.get("ssp322")
    entry332 = registry.get("ssp332")
    cases = [
        ("ssp322+quadratic", entry322.tableau, entry322.dense_weights),
        ("euler+linear", fe, first_order_weights(fe)),
        ("ssp332-steps", entry332.tableau, None),
    ]
    rows = []
    for label, tab, weights in cases:
        study = convergence_study(tab, weights, problem, u0, t_end, hs)
        rows.append(
            ConvergenceRow(
                label=label,
                step_slope=study.step_slope,
                dense_slope=study.dense_slope,
                hs=study.hs,
                step_errors=study.step_errors,
                dense_errors=study.dense_errors,
            )
        )
    return rows
