"""Sufficient blowup conditions.

Covers the main finite-horizon check (the F/M/G conjunction), the two
threshold lemmas, the early-collapse bound Z(t) with its constant c4, and
the Manakov-case variants with the extra integrals of motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NotManakov, RegimeViolation
from .functionals import InitialFunctionals
from .model import SystemParams

_TIME_TOL = 1e-9
_DEFAULT_SAMPLES = 4096


@dataclass(frozen=True)
class CriterionConstants:
    c1: float
    c2: Optional[float]
    c3: float
    c4: float
    beta: Optional[float]


@dataclass(frozen=True)
class CriterionReport:
    kind: str
    satisfied: bool
    certifiedTime: Optional[float]
    functionTrace: dict = field(repr=False)
    inputs: InitialFunctionals = field(repr=False)
    constants: Optional[CriterionConstants] = None


def _require_supercritical(params: SystemParams):
    if params.dim < 3:
        raise RegimeViolation(f"criteria need dim >= 3, got {params.dim}")
    if not params.gamma > 0:
        raise RegimeViolation("criteria need gamma > 0 (they divide by gamma)")


def in_focusing_regime(params: SystemParams) -> bool:
    """g1, g2 > 0 and g > -sqrt(g1*g2): the regime of the main theorem."""
    return (
        params.g1 > 0
        and params.g2 > 0
        and params.g > -math.sqrt(params.g1 * params.g2)
    )


def in_early_collapse_regime(params: SystemParams) -> bool:
    """g1 > 0 with repulsive-or-zero g2 and g: the early-collapse regime."""
    return params.g1 > 0 and params.g2 <= 0 and params.g <= 0


def constants(params: SystemParams) -> CriterionConstants:
    """The constants c1..c4 entering the blowup conditions.

    c2 (and hence beta) is defined only in the focusing regime; it is left
    as None otherwise so that c1, c3, c4 remain available.
    """
    _require_supercritical(params)
    N = params.dim
    gamma, kappa = params.gamma, params.kappa
    g1, g2, g = params.g1, params.g2, params.g
    c1 = 4 * gamma * kappa + 4 * gamma**2 * (5 * N + 6) / (N - 2)
    c3 = 32 * N / (N + 2) * max(1.0, g1, g2)
    c4 = 2 * gamma * math.sqrt(kappa / gamma + (N + 2) / (N - 2))
    if in_focusing_regime(params):
        if g >= 0:
            c2 = 0.8 * min(1.0, g1, g2)
        else:
            c2 = 0.8 * min(
                1.0,
                g1 + g * math.sqrt(g1 / g2),
                g2 + g * math.sqrt(g2 / g1),
            )
        beta = c3 * gamma / c2
    else:
        c2 = None
        beta = None
    return CriterionConstants(c1=c1, c2=c2, c3=c3, c4=c4, beta=beta)


def _require_c2(params: SystemParams) -> CriterionConstants:
    cc = constants(params)
    if cc.c2 is None:
        raise RegimeViolation(
            "c2 requires g1, g2 > 0 and g > -sqrt(g1*g2); got "
            f"g1={params.g1}, g2={params.g2}, g={params.g}"
        )
    return cc


def default_horizon(params: SystemParams) -> float:
    """Several gain e-foldings; the conditions are exponential-dominated beyond."""
    if not params.gamma > 0:
        raise RegimeViolation("default horizon needs gamma > 0")
    return 4.0 / params.gamma


def F_function(initial: InitialFunctionals, params: SystemParams, t):
    """Width bound F(t) built from the t=0 functionals."""
    if not params.gamma > 0:
        raise RegimeViolation("F is defined for gamma > 0 (it divides by gamma)")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    N = params.dim
    gamma, kappa = params.gamma, params.kappa
    val = (
        initial.msw
        + initial.mswRate * t
        + (8 * N / (N + 2)) * initial.energy * t**2
        + (4 * kappa / gamma**2)
        * initial.s0
        * (np.exp(2 * gamma * t) - 2 * gamma * t - 1)
    )
    return val if val.ndim else float(val)


def _running_sup_F(initial, params, t_grid):
    """sup of F over [0, t_i], refined by doubling the grid until stable."""
    t_end = t_grid[-1]
    n = max(4 * t_grid.size, 4096)
    prev = None
    while True:
        fine = np.linspace(0.0, t_end, n)
        sup_fine = np.maximum.accumulate(F_function(initial, params, fine))
        sup = np.interp(t_grid, fine, sup_fine)
        if prev is not None:
            scale = np.maximum(1.0, np.abs(sup))
            if np.max(np.abs(sup - prev) / scale) < 1e-10 or n > 2**22:
                return sup
        prev = sup
        n *= 2


def M_function(initial: InitialFunctionals, params: SystemParams, t):
    """M(t) = sup over [0,t] of F + 1."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    order = np.argsort(t_arr)
    grid = t_arr[order]
    sup = np.empty_like(grid)
    sup[order.argsort()] = _running_sup_F(initial, params, grid)
    out = sup + 1.0
    return out if np.ndim(t) else float(out[0])


def G_function(initial: InitialFunctionals, params: SystemParams, t):
    """G(t) = M(t) * (c1 t^2 / 2 + exp(c3 gamma t / c2) - 1)."""
    cc = _require_c2(params)
    t_arr = np.asarray(t, dtype=float)
    bracket = cc.c1 * t_arr**2 / 2 + np.exp(cc.beta * t_arr) - 1.0
    out = np.asarray(M_function(initial, params, t_arr)) * bracket
    return out if out.ndim else float(out)


def _bisect(pred, lo, hi, tol=_TIME_TOL):
    """Smallest t in (lo, hi] with pred(t) true, assuming pred(hi) is true."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def check_theorem1(
    initial: InitialFunctionals,
    params: SystemParams,
    horizon: Optional[float] = None,
    samples: int = _DEFAULT_SAMPLES,
) -> CriterionReport:
    """Scan (0, horizon] for a time where F + 1 < 0 and G < 1 jointly hold."""
    _require_supercritical(params)
    cc = _require_c2(params)
    if horizon is None:
        horizon = default_horizon(params)
    t = np.linspace(0.0, horizon, samples + 1)
    # The conjunction window can be much narrower than the scan spacing when
    # the energy is deeply negative; the threshold-lemma bracket endpoint
    # T0max (which depends only on X(0) and the constants) localizes it, so
    # scan that early region densely as well.
    t0_max = (1 / cc.beta) * math.log(
        1 + cc.beta**2 / ((1 + initial.msw) * (cc.beta**2 + cc.c1))
    )
    early = np.linspace(0.0, min(horizon, 1.5 * t0_max), samples + 1)
    t = np.unique(np.concatenate([t, early]))
    F = F_function(initial, params, t)
    M = np.asarray(M_function(initial, params, t))
    G = M * (cc.c1 * t**2 / 2 + np.exp(cc.beta * t) - 1.0)
    ok = (F + 1 < 0) & (G < 1)
    ok[0] = False
    trace = {"t": t, "F": F, "M": M, "G": G}
    if not ok.any():
        return CriterionReport("Theorem1", False, None, trace, initial, cc)
    i = int(np.argmax(ok))

    def pred(tt):
        return (
            F_function(initial, params, tt) + 1 < 0
            and G_function(initial, params, tt) < 1
        )

    t0 = _bisect(pred, t[i - 1], t[i])
    return CriterionReport("Theorem1", True, t0, trace, initial, cc)


def _t0_bracket(X0: float, C0: float, params: SystemParams, cc: CriterionConstants):
    beta, c1 = cc.beta, cc.c1
    t0_max = (1 / beta) * math.log(1 + beta**2 / ((1 + X0) * (beta**2 + c1)))
    m_tilde = 1 + X0 + C0 * (math.exp(2 * params.gamma * t0_max) - 1)
    t0_min = (1 / beta) * math.log(1 + beta**2 / (m_tilde * (beta**2 + c1)))
    return t0_max, t0_min, m_tilde


def lemma1_threshold(initial: InitialFunctionals, params: SystemParams) -> dict:
    """Negative-energy threshold: blowup certified when E(0) is below the bound."""
    _require_supercritical(params)
    cc = _require_c2(params)
    gamma, kappa = params.gamma, params.kappa
    N = params.dim
    C0 = abs(initial.mswRate) / (2 * gamma) + (4 * kappa / gamma**2) * initial.s0
    t0_max, t0_min, m_tilde = _t0_bracket(initial.msw, C0, params, cc)
    bound = -(N + 2) * m_tilde / (8 * N * t0_min**2)
    return {
        "T0max": t0_max,
        "T0min": t0_min,
        "E0bound": bound,
        "satisfied": initial.energy < bound,
        "constants": cc,
    }


def lemma2_threshold(initial: InitialFunctionals, params: SystemParams) -> dict:
    """Negative-Y(0) threshold with the redefined constant C0."""
    _require_supercritical(params)
    cc = _require_c2(params)
    gamma, kappa = params.gamma, params.kappa
    N = params.dim
    C0 = (
        4 * N * abs(initial.energy) / ((N + 2) * gamma**2)
        + (4 * kappa / gamma**2) * initial.s0
    )
    t0_max, t0_min, m_tilde = _t0_bracket(initial.msw, C0, params, cc)
    bound = 8 * kappa * initial.s0 / gamma - m_tilde / t0_min
    return {
        "T0max": t0_max,
        "T0min": t0_min,
        "Y0bound": bound,
        "satisfied": initial.mswRate < bound,
        "constants": cc,
    }


def energy_growth_bound(initial: InitialFunctionals, params: SystemParams, t):
    """E_max(t) = (E(0) + 2 kappa gamma S0(0) t) exp(2 gamma t)."""
    t = np.asarray(t, dtype=float)
    out = (
        initial.energy + 2 * params.kappa * params.gamma * initial.s0 * t
    ) * np.exp(2 * params.gamma * t)
    return out if out.ndim else float(out)


def early_collapse_Z(initial: InitialFunctionals, params: SystemParams, t):
    """Upper width bound Z(t) for the early-collapse regime, in closed form.

    The nested integral has exponential-polynomial integrands; both layers
    are integrated exactly (the tests compare against nested adaptive
    quadrature).
    """
    _require_supercritical(params)
    if not in_early_collapse_regime(params):
        raise RegimeViolation(
            "early collapse needs g1 > 0, g2 <= 0, g <= 0; got "
            f"g1={params.g1}, g2={params.g2}, g={params.g}"
        )
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    N = params.dim
    gamma, kappa = params.gamma, params.kappa
    cc = constants(params)
    c4 = cc.c4
    X0, Y0, E0, S0 = initial.msw, initial.mswRate, initial.energy, initial.s0

    # inner(s) = 4N int_0^s e^{c4 sig} (E_max(sig) + kappa S0 e^{2 gamma sig}) dsig
    #          = 4N int_0^s e^{lam sig} (alpha + beta sig) dsig
    lam = c4 + 2 * gamma
    alpha = E0 + kappa * S0
    beta = 2 * kappa * gamma * S0
    # e^{-2 c4 s} * inner(s) = 4N [ (alpha/lam - beta/lam^2)(e^{mu s} - e^{-2 c4 s})
    #                               + (beta/lam) s e^{mu s} ],  mu = 2 gamma - c4 < 0
    mu = lam - 2 * c4
    A1 = alpha / lam - beta / lam**2
    A2 = beta / lam
    int_emu = (np.exp(mu * t) - 1) / mu
    int_edecay = (1 - np.exp(-2 * c4 * t)) / (2 * c4)
    int_semu = t * np.exp(mu * t) / mu - (np.exp(mu * t) - 1) / mu**2
    out = (
        X0
        + (Y0 - c4 * X0) * int_edecay
        + 4 * N * (A1 * (int_emu - int_edecay) + A2 * int_semu)
    )
    return out if out.ndim else float(out)


def check_theorem2(
    initial: InitialFunctionals,
    params: SystemParams,
    horizon: Optional[float] = None,
    samples: int = _DEFAULT_SAMPLES,
) -> CriterionReport:
    """Find the smallest positive zero of Z within the horizon, if any."""
    if horizon is None:
        horizon = default_horizon(params)
    t = np.linspace(0.0, horizon, samples + 1)
    Z = early_collapse_Z(initial, params, t)
    cc = constants(params)
    trace = {"t": t, "Z": Z}
    below = Z <= 0
    below[0] = False
    if not below.any():
        return CriterionReport("Theorem2", False, None, trace, initial, cc)
    i = int(np.argmax(below))
    t_star = _bisect(
        lambda tt: early_collapse_Z(initial, params, tt) <= 0, t[i - 1], t[i]
    )
    return CriterionReport("Theorem2", True, t_star, trace, initial, cc)


def _require_manakov(params: SystemParams):
    if not (params.g1 == params.g2 == params.g):
        raise NotManakov(
            f"need g1 = g2 = g, got g1={params.g1}, g2={params.g2}, g={params.g}"
        )


def manakov_invariants(initial: InitialFunctionals, params: SystemParams) -> dict:
    """The two conserved quantities and, in the unbroken phase, the
    oscillation of the total power.

    The printed closed-form coefficient of cos(2 omega t) disagrees with
    the ODE solution it is supposed to solve; the ODE-derived value (which
    reproduces S0(0) at t=0 exactly) is used, and the printed variant is
    reported alongside.
    """
    _require_manakov(params)
    gamma, kappa = params.gamma, params.kappa
    s1_const = initial.s1
    s_const = kappa * initial.s0 - gamma * initial.s2
    out = {"S1const": s1_const, "Sconst": s_const, "oscillation": None}
    if kappa > gamma:
        omega = math.sqrt(kappa**2 - gamma**2)
        mean = kappa * s_const / omega**2
        s01 = initial.s0 - mean
        s01_printed = (
            initial.s0 * (1 - kappa / omega**2)
            + initial.s2 * gamma * kappa / omega**2
        )
        s02 = gamma * initial.s3 / omega
        out["oscillation"] = {
            "mean": mean,
            "S01": s01,
            "S01printed": s01_printed,
            "S02": s02,
            "omega": omega,
            "S0max": mean + math.hypot(s01, s02),
        }
    return out


def manakov_F(initial: InitialFunctionals, params: SystemParams, t):
    """Quadratic width bound of the Manakov reformulation."""
    t = np.asarray(t, dtype=float)
    N = params.dim
    out = (
        initial.msw
        + initial.mswRate * t
        + (8 * N / (N + 2)) * (initial.energy - params.kappa * initial.s1) * t**2
    )
    return out if out.ndim else float(out)


def check_manakov_theorem(
    initial: InitialFunctionals,
    params: SystemParams,
    horizon: Optional[float] = None,
    samples: int = _DEFAULT_SAMPLES,
) -> CriterionReport:
    """Manakov-case conjunction check with the simplified F-hat and G-hat."""
    _require_supercritical(params)
    _require_manakov(params)
    if not params.g > 0:
        raise RegimeViolation(f"Manakov check needs g > 0, got g={params.g}")
    if horizon is None:
        horizon = default_horizon(params)
    cc = constants(params)
    N = params.dim
    t = np.linspace(0.0, horizon, samples + 1)
    F = manakov_F(initial, params, t)
    M = np.maximum.accumulate(F) + 1.0
    G = M * (cc.c1 * t**2 / 2 + np.exp(48 * N * params.gamma * t / (N + 2)) - 1.0)
    ok = (F + 1 < 0) & (G < 1)
    ok[0] = False
    trace = {"t": t, "F": F, "M": M, "G": G}
    if not ok.any():
        return CriterionReport("Manakov", False, None, trace, initial, cc)
    i = int(np.argmax(ok))

    def pred(tt):
        ts = np.linspace(0.0, tt, samples + 1)
        Fs = manakov_F(initial, params, ts)
        Ms = float(np.max(Fs)) + 1.0
        Gs = Ms * (
            cc.c1 * tt**2 / 2
            + math.exp(48 * N * params.gamma * tt / (N + 2))
            - 1.0
        )
        return Fs[-1] + 1 < 0 and Gs < 1

    t0 = _bisect(pred, t[i - 1], t[i])
    return CriterionReport("Manakov", True, t0, trace, initial, cc)
