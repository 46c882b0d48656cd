"""Radially symmetric 3D time evolution of the coupled gain/loss system.

Works in the reduced variables p = r*u, q = r*v on a uniform grid with zero
boundary values at r = 0 and r = L.  The stepper is Crank-Nicolson with the
nonlinear factor handled by lagged fixed-point correction; each corrector
pass solves one complex tridiagonal system per component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConfigInvalid, SolverDiverged
from .functionals import DiagnosticsSample, grid_functionals
from .model import GaussianIC, SystemParams, evaluate_ic


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid of n interior nodes on [0, L]; dr = L/(n+1)."""

    L: float
    n: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be > 0")
        if self.n < 16:
            raise ValueError("need at least 16 interior nodes")

    @property
    def dr(self) -> float:
        return self.L / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.dr * np.arange(1, self.n + 1)


@dataclass(frozen=True)
class RadialState:
    grid: RadialGrid
    p: np.ndarray
    q: np.ndarray
    t: float

    def __post_init__(self):
        if self.p.shape != (self.grid.n,) or self.q.shape != (self.grid.n,):
            raise ValueError("field arrays must match the grid")


# Desk-scale defaults; the reference resolution (dr ~ 1e-5) is far beyond
# what is practical here, so verdicts are qualitative.
@dataclass(frozen=True)
class RunConfig:
    dt0: float = 1e-4
    dtMin: float = 1e-8
    blowupRatio: float = 100.0
    tMax: float = 5.0
    sampleEvery: int = 100
    cnIterations: int = 2

    def __post_init__(self):
        # dtMin == dt0 is allowed (no adaptivity headroom; flagged by
        # convergence_check) but dtMin may never exceed dt0
        if not (self.dt0 >= self.dtMin > 0):
            raise ConfigInvalid("need dt0 >= dtMin > 0")
        if not self.blowupRatio > 1:
            raise ConfigInvalid("blowupRatio must be > 1")
        if self.tMax <= 0 or self.sampleEvery < 1 or self.cnIterations < 1:
            raise ConfigInvalid("tMax, sampleEvery, cnIterations must be positive")


DEFAULT_GRID = RadialGrid(L=16.0, n=7999)  # dr = 2e-3


@dataclass(frozen=True)
class RunOutcome:
    verdict: str  # BlowupLike | Dispersed | MaxTimeReached | SolverDiverged
    tStop: float
    component: str  # U | V | Both | None
    trace: List[DiagnosticsSample]
    finalState: Optional[RadialState] = field(default=None, repr=False)


def load_initial(ic: GaussianIC, grid: RadialGrid, params: SystemParams) -> RadialState:
    """Sample the Gaussian inputs onto the grid in the p = r*u variables."""
    r = grid.nodes
    u0, v0 = evaluate_ic(ic, params, r)
    return RadialState(grid=grid, p=r * u0, q=r * v0, t=0.0)


def _tridiag_solve(diag, off, rhs):
    ab = np.zeros((3, diag.size), dtype=complex)
    ab[0, 1:] = off
    ab[1, :] = diag
    ab[2, :-1] = off
    try:
        return solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise SolverDiverged(f"tridiagonal solve failed: {exc}") from exc


def _lap(f: np.ndarray, dr: float) -> np.ndarray:
    out = -2.0 * f
    out[:-1] += f[1:]
    out[1:] += f[:-1]
    return out / dr**2


def step(
    state: RadialState,
    params: SystemParams,
    dt: float,
    cn_iterations: int = 2,
) -> RadialState:
    """One Crank-Nicolson step of size dt.

    The nonlinear factor r^-2(g1|p|^2 + g|q|^2) is frozen at a midpoint
    estimate and used on both time levels (this keeps the linear solve a
    Cayley transform, hence power-conserving at gamma = 0); the linear
    coupling is averaged between the old level and the current corrector
    guess.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    grid = state.grid
    dr = grid.dr
    r2 = grid.nodes**2
    gamma, kappa = params.gamma, params.kappa
    g1, g2, g = params.g1, params.g2, params.g
    k = dt / 2.0
    off = -1j * k / dr**2
    p0, q0 = state.p, state.q
    p2_0, q2_0 = np.abs(p0) ** 2, np.abs(q0) ** 2
    lap_p0 = _lap(p0, dr)
    lap_q0 = _lap(q0, dr)
    ps, qs = p0, q0
    for _ in range(cn_iterations):
        p2m = 0.5 * (p2_0 + np.abs(ps) ** 2)
        q2m = 0.5 * (q2_0 + np.abs(qs) ** 2)
        w_p = (g1 * p2m + g * q2m) / r2
        w_q = (g * p2m + g2 * q2m) / r2
        rhs_p = (
            p0
            + k * (1j * lap_p0 + gamma * p0 + 1j * w_p * p0)
            - 1j * k * kappa * (q0 + qs)
        )
        rhs_q = (
            q0
            + k * (1j * lap_q0 - gamma * q0 + 1j * w_q * q0)
            - 1j * k * kappa * (p0 + ps)
        )
        diag_p = 1.0 - k * (-2j / dr**2 + gamma + 1j * w_p)
        diag_q = 1.0 - k * (-2j / dr**2 - gamma + 1j * w_q)
        ps = _tridiag_solve(diag_p, off, rhs_p)
        qs = _tridiag_solve(diag_q, off, rhs_q)
    if not (np.all(np.isfinite(ps.view(float))) and np.all(np.isfinite(qs.view(float)))):
        raise SolverDiverged(f"non-finite field values at t={state.t + dt:g}")
    return replace(state, p=ps, q=qs, t=state.t + dt)


def _origin_amp(state: RadialState) -> tuple:
    r1 = state.grid.dr
    return abs(state.p[0]) / r1, abs(state.q[0]) / r1


def _grace_phase(state, params, cfg, dt, u0_origin, v0_origin, ratio_u, ratio_v):
    """Continue briefly after the first origin-ratio crossing.

    Collapsing components cross the threshold at slightly staggered times;
    stepping on until the remaining growing ratio either crosses too or
    stops growing (with a hard amplitude cap) makes the component flag
    reflect the joint growth rather than the tie-break of a single step.
    """
    cap = 2.0 * cfg.blowupRatio
    prev_lag = min(ratio_u, ratio_v)
    while (
        min(ratio_u, ratio_v) < cfg.blowupRatio
        and max(ratio_u, ratio_v) < cap
        and state.t < cfg.tMax
    ):
        prev_max = max(np.max(np.abs(state.p)), np.max(np.abs(state.q)), 1e-300)
        try:
            new = step(state, params, dt, cfg.cnIterations)
        except SolverDiverged:
            break
        new_max = max(np.max(np.abs(new.p)), np.max(np.abs(new.q)))
        if not math.isfinite(new_max):
            break
        if new_max / prev_max - 1.0 > 0.05 and dt / 2 >= cfg.dtMin:
            dt /= 2
            continue
        state = new
        ou, ov = _origin_amp(state)
        ratio_u = ou / u0_origin if u0_origin > 0 else 0.0
        ratio_v = ov / v0_origin if v0_origin > 0 else 0.0
        lag = min(ratio_u, ratio_v)
        if lag <= prev_lag:  # the laggard stopped growing; give up waiting
            break
        prev_lag = lag
    return state, ratio_u, ratio_v


def run(
    ic: GaussianIC,
    params: SystemParams,
    grid: RadialGrid = DEFAULT_GRID,
    cfg: RunConfig = RunConfig(),
) -> RunOutcome:
    """Evolve until blowup-like growth, the time horizon, or divergence.

    'BlowupLike' deliberately hedges: it records that the origin amplitude
    ratio crossed cfg.blowupRatio, which is the presumable manifestation of
    the blowup, not a proof.
    """
    state = load_initial(ic, grid, params)
    u0_origin, v0_origin = _origin_amp(state)
    trace = [grid_functionals(state, params)]
    peak_u0 = math.sqrt(trace[0].peakU2)
    peak_v0 = math.sqrt(trace[0].peakV2)
    dt = cfg.dt0
    steps = 0
    while state.t < cfg.tMax:
        dt = min(dt, cfg.tMax - state.t) if cfg.tMax - state.t > cfg.dtMin else dt
        prev_max = max(np.max(np.abs(state.p)), np.max(np.abs(state.q)), 1e-300)
        try:
            new = step(state, params, dt, cfg.cnIterations)
        except SolverDiverged:
            trace.append(grid_functionals(state, params))
            return RunOutcome("SolverDiverged", state.t, "None", trace, state)
        new_max = max(np.max(np.abs(new.p)), np.max(np.abs(new.q)))
        if not math.isfinite(new_max):
            return RunOutcome("SolverDiverged", state.t, "None", trace, state)
        if new_max / prev_max - 1.0 > 0.05 and dt / 2 >= cfg.dtMin:
            dt /= 2
            continue
        state = new
        steps += 1
        if steps % cfg.sampleEvery == 0:
            trace.append(grid_functionals(state, params))
        ou, ov = _origin_amp(state)
        ratio_u = ou / u0_origin if u0_origin > 0 else 0.0
        ratio_v = ov / v0_origin if v0_origin > 0 else 0.0
        if ratio_u >= cfg.blowupRatio or ratio_v >= cfg.blowupRatio:
            # Grace phase: keep stepping briefly so that a second component
            # that is still growing can cross as well (runs are interrupted
            # once the growing ratios are of order blowupRatio, jointly).
            state, ratio_u, ratio_v = _grace_phase(
                state, params, cfg, dt, u0_origin, v0_origin, ratio_u, ratio_v
            )
            if trace[-1].t != state.t:
                trace.append(grid_functionals(state, params))
            comp = (
                "Both"
                if (ratio_u >= cfg.blowupRatio and ratio_v >= cfg.blowupRatio)
                else ("U" if ratio_u >= cfg.blowupRatio else "V")
            )
            return RunOutcome("BlowupLike", state.t, comp, trace, state)
    if trace[-1].t != state.t:
        trace.append(grid_functionals(state, params))
    verdict = "MaxTimeReached"
    last = trace[-1]
    peaks_bounded = (
        math.sqrt(last.peakU2) < 2 * peak_u0 and math.sqrt(last.peakV2) < 2 * peak_v0
    )
    tail = [s for s in trace if s.t >= 0.75 * cfg.tMax]
    msw_growing = len(tail) >= 2 and all(
        b.msw >= a.msw for a, b in zip(tail, tail[1:])
    )
    if peaks_bounded and msw_growing:
        verdict = "Dispersed"
    return RunOutcome(verdict, state.t, "None", trace, state)


@dataclass(frozen=True)
class ConvergenceReport:
    verdicts: List[str]
    tStops: List[float]
    tStopDiffs: List[float]
    traceDiffs: List[float]
    converged: bool
    adaptivityHeadroom: bool


def _refine_grid(grid: RadialGrid) -> RadialGrid:
    return RadialGrid(L=grid.L, n=2 * (grid.n + 1) - 1)


def convergence_check(
    ic: GaussianIC,
    params: SystemParams,
    grid: RadialGrid,
    cfg: RunConfig,
    refinements: int = 1,
) -> ConvergenceReport:
    """Rerun with dr and dt halved and report Cauchy differences."""
    if refinements < 1:
        raise ValueError("refinements must be >= 1")
    outcomes = [run(ic, params, grid, cfg)]
    g, c = grid, cfg
    for _ in range(refinements):
        g = _refine_grid(g)
        c = replace(c, dt0=c.dt0 / 2, dtMin=c.dtMin / 2)
        outcomes.append(run(ic, params, g, c))
    t_stops = [o.tStop for o in outcomes]
    t_stop_diffs = [abs(b - a) for a, b in zip(t_stops, t_stops[1:])]
    trace_diffs = []
    for a, b in zip(outcomes, outcomes[1:]):
        t_common = np.linspace(0.0, 0.9 * min(a.tStop, b.tStop), 32)
        if t_common[-1] <= 0:
            trace_diffs.append(float("nan"))
            continue
        sa = np.interp(t_common, [s.t for s in a.trace], [s.stokes.s0 for s in a.trace])
        sb = np.interp(t_common, [s.t for s in b.trace], [s.stokes.s0 for s in b.trace])
        trace_diffs.append(float(np.max(np.abs(sa - sb) / np.maximum(1.0, np.abs(sb)))))
    converged = all(
        b <= a for a, b in zip(t_stop_diffs, t_stop_diffs[1:])
    ) and all(b <= a for a, b in zip(trace_diffs, trace_diffs[1:]))
    return ConvergenceReport(
        verdicts=[o.verdict for o in outcomes],
        tStops=t_stops,
        tStopDiffs=t_stop_diffs,
        traceDiffs=trace_diffs,
        converged=converged,
        adaptivityHeadroom=cfg.dt0 > cfg.dtMin,
    )
