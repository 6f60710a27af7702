"""Gradient solvers for diagonal quadratics.

Three entry points:

* :func:`solve_bb`: steepest descent once, then plain BB1.
* :func:`solve_new`: the adaptive method mixing long BB1 steps with short
  steps built from the three-dimensional quadratic-termination stepsize
  (or the two-dimensional BBQ stepsize when ``use_new_step`` is off).
* :func:`verify_3d_termination`: the fixed 8-step schedule on the 3-d
  verification problem that demonstrates finite termination numerically.

The per-iteration work runs through :mod:`qtgrad.kernels`, one fused pass
over the vectors per step.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import kernels, quadprob
from .errors import Degenerate, NonPositiveCurvature, ZeroDenominator
from .report import (
    STATUS_DEGENERATE,
    STATUS_MAXITER,
    STATUS_OK,
    RunReport,
    TraceRecord,
)
from .stepsizes import StepPair, bb1, bb2, bbq_stepsize, day_stepsize, sd_stepsize
from .termination3d import GradientHistory, alpha_new_bb, alpha_new_direct, gram_schmidt3


@dataclass(frozen=True)
class QuadSolverConfig:
    """Knobs for the quadratic solvers.

    ``eps`` is the relative gradient-norm reduction target, the run stops
    at ||g_k|| <= eps ||g_1||.  ``use_new_step`` switches the short branch
    of solve_new between the three-dimensional stepsize (True) and the
    BBQ stepsize alone (False), which gives the BBQ comparison method.
    """

    tau1: float = 0.5
    gamma: float = 1.0
    eps: float = 1e-9
    max_iter: int = 50000
    tol_den: float = 1e-12
    tol_dep: float = 1e-10
    use_new_step: bool = True
    keep_trace: bool = False

    def __post_init__(self):
        if not 0.0 < self.tau1 <= 1.0:
            raise ValueError("tau1 must lie in (0, 1]")
        if self.gamma < 1.0:
            raise ValueError("gamma must be at least 1")


class _QuadRun:
    """Shared stepping state: buffers, history, counters, trace."""

    def __init__(self, p: quadprob.QuadraticProblem, x0, cfg: QuadSolverConfig,
                 method: str):
        self.p = p
        self.cfg = cfg
        self.v = p.spectrum
        self.xs = p.x_star
        self.gscale = p.grad_scale
        self.x = np.array(x0, dtype=float)
        if self.x.shape != self.v.shape:
            raise ValueError("x0 has the wrong dimension")
        self.g = np.empty_like(self.x)
        self.g_next = np.empty_like(self.x)
        self.gg = kernels.quad_gradient(self.v, self.xs, self.x, self.gscale, self.g)
        self.gnorm_start = math.sqrt(self.gg)
        self.hist = GradientHistory()
        if self.gg > 0.0:
            self.hist.push(self.gg)
        self.k = 1
        self.tau = cfg.tau1
        self.report = RunReport(method=method, ngrad=1)
        self.t0 = time.perf_counter()

    def converged(self) -> bool:
        return math.sqrt(self.gg) <= self.cfg.eps * self.gnorm_start

    def step(self, alpha: float, branch: str) -> None:
        """Move to the next iterate and refresh history and counters."""
        gg_old = self.gg
        self.hist.set_stepsize(alpha)
        gy, yy, gg_new = kernels.quad_step(
            self.v, self.xs, self.x, self.g, self.g_next, alpha, self.gscale)
        self.g, self.g_next = self.g_next, self.g
        self.gg = gg_new
        self.k += 1
        rep = self.report
        rep.iterations += 1
        rep.ngrad += 1
        rep.count(branch)
        sy = -alpha * gy
        new_bb1 = math.nan
        new_bb2 = math.nan
        if sy > 0.0:
            new_bb1 = alpha * alpha * gg_old / sy
            if yy > 0.0:
                new_bb2 = sy / yy
        if gg_new > 0.0:
            self.hist.push(gg_new, new_bb1, new_bb2)
        if self.cfg.keep_trace:
            rep.trace.append(TraceRecord(
                k=self.k - 1, stepsize=alpha, branch=branch,
                gnorm=math.sqrt(gg_new),
                fval=kernels.quad_value(self.v, self.xs, self.x, self.p.value_scale),
                bb1=new_bb1, bb2=new_bb2, tau=self.tau))

    def sd_start(self) -> float:
        return sd_stepsize(self.g, quadprob.hess_vec(self.p, self.g))

    def finish(self, status: str, message: str = "") -> RunReport:
        rep = self.report
        rep.status = status
        rep.message = message
        rep.final_gnorm = math.sqrt(self.gg)
        rep.final_f = kernels.quad_value(self.v, self.xs, self.x, self.p.value_scale)
        rep.wall_time = time.perf_counter() - self.t0
        return rep


def solve_bb(p: quadprob.QuadraticProblem, x0,
             cfg: QuadSolverConfig | None = None) -> RunReport:
    """Plain BB method: one exact SD step, then BB1 throughout."""
    cfg = cfg or QuadSolverConfig()
    run = _QuadRun(p, x0, cfg, "bb")
    if run.converged():
        return run.finish(STATUS_OK)
    alpha, branch = run.sd_start(), "sd"
    while True:
        run.step(alpha, branch)
        if run.converged():
            return run.finish(STATUS_OK)
        if run.report.iterations >= cfg.max_iter:
            return run.finish(STATUS_MAXITER, "iteration budget exhausted")
        cur = run.hist.rec(-1)
        if math.isfinite(cur.bb1) and cur.bb1 > 0.0:
            alpha, branch = cur.bb1, "bb1"
        else:
            branch = "fallback"


def solve_new(p: quadprob.QuadraticProblem, x0,
              cfg: QuadSolverConfig | None = None) -> RunReport:
    """Adaptive method: long BB1 steps, short quadratic-termination steps.

    Warm-up is one SD step and three BB1 steps.  From the fifth iterate
    on, whenever bb2/bb1 falls under the adaptive threshold tau the
    stepsize is the min of the last two BB2 values and the
    three-dimensional stepsize; failing that the BBQ stepsize; failing
    that the BB2 min alone.  tau shrinks by gamma after every short
    branch and grows by gamma otherwise.
    """
    cfg = cfg or QuadSolverConfig()
    run = _QuadRun(p, x0, cfg, "new" if cfg.use_new_step else "bbq")
    if run.converged():
        return run.finish(STATUS_OK)
    alpha, branch = run.sd_start(), "sd"
    while True:
        run.step(alpha, branch)
        if run.converged():
            return run.finish(STATUS_OK)
        if run.report.iterations >= cfg.max_iter:
            return run.finish(STATUS_MAXITER, "iteration budget exhausted")
        cur = run.hist.rec(-1)
        cur_bb1, cur_bb2 = cur.bb1, cur.bb2
        if not (math.isfinite(cur_bb1) and cur_bb1 > 0.0):
            branch = "fallback"
            continue
        if run.k < 5:
            alpha, branch = cur_bb1, "bb1"
            continue
        if math.isfinite(cur_bb2) and cur_bb2 / cur_bb1 < run.tau:
            prev = run.hist.rec(-2)
            cands = [cur_bb2]
            if math.isfinite(prev.bb2) and prev.bb2 > 0.0:
                cands.append(prev.bb2)
            branch = "short_bb2"
            if cfg.use_new_step:
                try:
                    cands.append(alpha_new_bb(run.hist, cfg.tol_dep))
                    branch = "short_new"
                except Degenerate:
                    pass
            if branch != "short_new":
                try:
                    cands.append(bbq_stepsize(
                        prev.bb1, cur_bb1, prev.bb2, cur_bb2, cfg.tol_den))
                    branch = "short_bbq"
                except Degenerate:
                    pass
            alpha = min(cands)
            run.tau /= cfg.gamma
        else:
            alpha, branch = cur_bb1, "bb1"
            run.tau *= cfg.gamma


_VERIFY_METHODS = ("day3d", "bb13d", "bb23d", "bb1")


def verify_3d_termination(kappa: float, method: str, seed: int,
                          keep_trace: bool = False) -> RunReport:
    """Fixed 8-step schedule on the 3-d verification problem.

    ``method`` picks the baseline stepsize used away from the special
    iterations: "day3d", "bb13d" or "bb23d" run that stepsize with the
    direct three-dimensional step at k=3 and the BBQ step at k=6;
    "bb1" runs unmodified BB1 with no special steps, the control column.
    Reports ||g|| and f at the ninth iterate.  A Degenerate special step
    marks the run failed rather than substituting another stepsize.
    """
    if method not in _VERIFY_METHODS:
        raise ValueError(f"method must be one of {_VERIFY_METHODS}")
    p = quadprob.verification_problem(kappa)
    x = quadprob.starting_point(p, seed)
    rep = RunReport(method=method)
    t0 = time.perf_counter()
    g = quadprob.gradient(p, x)
    rep.ngrad = 1
    early_grads: list[np.ndarray] = [g.copy()]
    pair_cur: StepPair | None = None   # pair ending at the current iterate
    pair_prev: StepPair | None = None
    special = method != "bb1"
    base = {"day3d": day_stepsize, "bb13d": bb1, "bb23d": bb2, "bb1": bb1}[method]

    def finish(status: str, message: str = "") -> RunReport:
        rep.status = status
        rep.message = message
        rep.final_gnorm = float(np.linalg.norm(g))
        rep.final_f = quadprob.value(p, x)
        rep.wall_time = time.perf_counter() - t0
        return rep

    for k in range(1, 9):
        if float(g @ g) == 0.0:
            # already at the minimizer, remaining steps are no-ops
            return finish(STATUS_OK)
        try:
            if k == 1:
                alpha, branch = sd_stepsize(g, quadprob.hess_vec(p, g)), "sd"
            elif special and k == 3:
                u, v, r = gram_schmidt3(*early_grads)
                alpha = alpha_new_direct(u, v, r, lambda d: quadprob.hess_vec(p, d))
                branch = "new3d"
            elif special and k == 6:
                alpha = bbq_stepsize(bb1(pair_prev), bb1(pair_cur),
                                     bb2(pair_prev), bb2(pair_cur))
                branch = "bbq"
            else:
                alpha, branch = base(pair_cur), "base"
        except (Degenerate, NonPositiveCurvature, ZeroDenominator) as exc:
            return finish(STATUS_DEGENERATE, f"at k={k}: {exc}")
        x = x - alpha * g
        g_new = quadprob.gradient(p, x)
        rep.ngrad += 1
        rep.iterations = k
        rep.count(branch)
        pair_prev = pair_cur
        pair_cur = StepPair.from_vectors(-alpha * g, g_new - g)
        g = g_new
        if len(early_grads) < 3:
            early_grads.append(g.copy())
        if keep_trace:
            rep.trace.append(TraceRecord(
                k=k, stepsize=alpha, branch=branch,
                gnorm=float(np.linalg.norm(g)), fval=quadprob.value(p, x)))
    return finish(STATUS_OK)
