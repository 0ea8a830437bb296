"""Search for pulse-parameter solutions of the controlled-phase conditions.

A gate at duration T_G = 2(m pi + phi)/|delta| is a good Cphase gate
when both collective Rabi oscillations come back near their start with
the right sign pattern.  Candidates are located as local extrema of a
scalar condition function of the drive ratio xi = |Omega|/|delta|:

* controlled-Z (phi absorbed in the sign pattern):
  f(m, xi) = |cos(m pi sqrt(xi^2+1))| * cos(m pi sqrt(2 xi^2+1)),
  target (-1)^(m+1).  The magnitude on the first factor makes f agnostic
  to which of the two controlled-Z sign conventions a solution realizes;
  the realized convention follows from the sign of the first cosine.
* general phase phi:
  g(m, xi, phi) = cos[(m pi + phi) sqrt(xi^2+1)]
                + cos[(m pi + phi) sqrt(2 xi^2+1)], target 2 (-1)^m.

There are no exact solutions; the scan grids xi, polishes each extremum
by golden-section refinement, predicts the infinite-blockade minimum
fidelity from the closed-form gate, and ranks candidates by that
fidelity (ties: shorter pulse first).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .gates import (
    FLIP_ON_00,
    FLIP_ON_11,
    TargetGate,
    align_global_phase,
    min_fidelity,
    ideal_gate,
)
from .hamiltonians import PulseParams
from .simulate import simulate_gate

__all__ = [
    "SolutionCandidate",
    "ShapedOptimum",
    "f_value",
    "g_value",
    "scan",
    "gate_time",
    "optimize_shaped",
]


def f_value(m: int, xi: float) -> float:
    """Controlled-Z condition value; a gate needs f close to (-1)^(m+1)."""
    _check_m_xi(m, xi)
    x = m * np.pi * np.sqrt(xi * xi + 1.0)
    y = m * np.pi * np.sqrt(2.0 * xi * xi + 1.0)
    return float(np.abs(np.cos(x)) * np.cos(y))


def g_value(m: int, xi: float, phi: float) -> float:
    """General-phase condition value; a gate needs g close to 2(-1)^m."""
    _check_m_xi(m, xi)
    base = m * np.pi + phi
    return float(
        np.cos(base * np.sqrt(xi * xi + 1.0))
        + np.cos(base * np.sqrt(2.0 * xi * xi + 1.0))
    )


def _check_m_xi(m: int, xi: float) -> None:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi}")


def gate_time(m: int, phi: float, delta: float) -> float:
    """Pulse duration 2(m pi + phi)/|delta| in seconds (phi = 0 for CZ)."""
    if delta == 0:
        raise ValueError("delta must be nonzero to derive a gate time")
    return 2.0 * (m * np.pi + phi) / abs(delta)


@dataclass(frozen=True)
class SolutionCandidate:
    """One (m, xi) solution with its figures of merit.

    `form` is "f" for controlled-Z candidates (phi = 0, convention set
    to the realized sign pattern) and "g" for general-phase candidates
    (convention "cphase", phi as requested).  tau ratios are the pulse
    duration in units of the two collective Rabi periods,
    m' sqrt(xi^2+1) and m' sqrt(2 xi^2+1) with m' = m + phi/pi.
    """

    m: int
    xi: float
    phi: float
    form: str
    convention: str
    condition_value: float
    gate_time_scaled: float
    tau1_ratio: float
    tau2_ratio: float
    predicted_fmin: float

    def target_gate(self) -> TargetGate:
        if self.form == "g":
            return TargetGate.cphase(self.phi)
        return TargetGate(np.pi, self.convention)

    def gate_time(self, delta: float) -> float:
        return gate_time(self.m, self.phi, delta)

    def pulse(self, omega: float, delta_rr: float, **kwargs) -> PulseParams:
        """PulseParams at fixed Omega with delta derived from xi."""
        delta = abs(omega) / self.xi
        return PulseParams(
            omega=omega,
            delta=delta,
            delta_rr=delta_rr,
            duration=self.gate_time(delta),
            **kwargs,
        )


def _cz_convention(m: int, xi: float) -> str:
    """Which controlled-Z sign pattern an f-form solution realizes."""
    c1 = np.cos(m * np.pi * np.sqrt(xi * xi + 1.0))
    return FLIP_ON_00 if np.sign(c1) == (-1) ** (m + 1) else FLIP_ON_11


def _predicted_fmin(m: int, xi: float, phi: float, target: TargetGate) -> float:
    gate = ideal_gate(m, xi, phi)
    aligned, _ = align_global_phase(gate, target)
    return float(min_fidelity(aligned, target))


def _make_candidate(m: int, xi: float, phi: float | None) -> SolutionCandidate:
    if phi is None:
        conv = _cz_convention(m, xi)
        cand = SolutionCandidate(
            m=m,
            xi=xi,
            phi=0.0,
            form="f",
            convention=conv,
            condition_value=f_value(m, xi),
            gate_time_scaled=2.0 * m * np.pi,
            tau1_ratio=m * np.sqrt(xi * xi + 1.0),
            tau2_ratio=m * np.sqrt(2.0 * xi * xi + 1.0),
            predicted_fmin=0.0,
        )
    else:
        m_eff = m + phi / np.pi
        cand = SolutionCandidate(
            m=m,
            xi=xi,
            phi=phi,
            form="g",
            convention="cphase",
            condition_value=g_value(m, xi, phi),
            gate_time_scaled=2.0 * (m * np.pi + phi),
            tau1_ratio=m_eff * np.sqrt(xi * xi + 1.0),
            tau2_ratio=m_eff * np.sqrt(2.0 * xi * xi + 1.0),
            predicted_fmin=0.0,
        )
    fmin = _predicted_fmin(m, xi, cand.phi if cand.form == "g" else 0.0,
                           cand.target_gate())
    return replace(cand, predicted_fmin=fmin)


def scan(
    m_range: tuple[int, int],
    xi_max: float,
    phi: float | None = None,
    grid_step: float = 1e-4,
    keep: int | None = None,
) -> list[SolutionCandidate]:
    """Locate and refine condition-function solutions.

    For each m in the inclusive `m_range`, the condition function is
    evaluated on a xi grid; local extrema approaching the target value
    ((-1)^(m+1) for the CZ form, 2(-1)^m for phi given) are found from
    sign changes of the central-difference derivative and polished by
    golden-section refinement to xi tolerance ~1e-6.  Extrema further
    than 0.5 from the target are dropped.  Candidates are ranked by
    predicted minimum fidelity (descending), ties broken by shorter
    pulse (smaller tau1 ratio); `keep` truncates the list.
    """
    if grid_step > 1e-3:
        raise ValueError(f"grid_step must be <= 1e-3, got {grid_step}")
    if xi_max > 10.0:
        raise ValueError(f"xi_max must be <= 10, got {xi_max}")
    m_lo, m_hi = m_range
    if m_lo < 1 or m_hi < m_lo:
        raise ValueError(f"invalid m range {m_range}")

    out: list[SolutionCandidate] = []
    xs = np.arange(grid_step, xi_max + 0.5 * grid_step, grid_step)
    for m in range(m_lo, m_hi + 1):
        if phi is None:
            target = float((-1) ** (m + 1))
            vals = _f_grid(m, xs)
        else:
            target = float(2 * (-1) ** m)
            vals = _g_grid(m, xs, phi)
        # maximize h = target-signed condition value
        h = np.sign(target) * vals
        dh = np.gradient(h, xs)
        idx = np.where((dh[:-1] > 0) & (dh[1:] <= 0))[0]
        for i in idx:
            lo = xs[max(i - 1, 0)]
            hi = xs[min(i + 2, len(xs) - 1)]
            xi_star = _refine(m, phi, lo, hi, np.sign(target))
            value = f_value(m, xi_star) if phi is None else g_value(m, xi_star, phi)
            if abs(value - target) >= 0.5:
                continue
            if any(c.m == m and abs(c.xi - xi_star) < 1e-5 for c in out):
                continue
            out.append(_make_candidate(m, xi_star, phi))
    out.sort(key=lambda c: (-c.predicted_fmin, c.tau1_ratio))
    return out[:keep] if keep is not None else out


def _f_grid(m: int, xs: np.ndarray) -> np.ndarray:
    x = m * np.pi * np.sqrt(xs * xs + 1.0)
    y = m * np.pi * np.sqrt(2.0 * xs * xs + 1.0)
    return np.abs(np.cos(x)) * np.cos(y)


def _g_grid(m: int, xs: np.ndarray, phi: float) -> np.ndarray:
    base = m * np.pi + phi
    return np.cos(base * np.sqrt(xs * xs + 1.0)) + np.cos(
        base * np.sqrt(2.0 * xs * xs + 1.0)
    )


def _refine(m: int, phi: float | None, lo: float, hi: float, sign: float) -> float:
    def neg(x: float) -> float:
        v = f_value(m, x) if phi is None else g_value(m, x, phi)
        return -sign * v

    mid = 0.5 * (lo + hi)
    if not (neg(mid) < neg(lo) and neg(mid) < neg(hi)):
        # no strict interior bracket; fall back to bounded refinement
        res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-7})
        return float(res.x)
    res = minimize_scalar(neg, bracket=(lo, mid, hi), method="golden",
                          options={"xtol": 1e-6})
    return float(res.x)


@dataclass(frozen=True)
class ShapedOptimum:
    """Result of the shaped-pulse parameter optimization."""

    xi: float
    t_gate: float
    fmin: float
    improved: bool
    start_fmin: float
    n_evaluations: int


def optimize_shaped(
    p: PulseParams,
    m: int,
    xi0: float,
    t0: float,
    target: TargetGate,
    *,
    search_dt: float = 2e-9,
    verify_dt: float = 2.5e-10,
    max_evaluations: int = 400,
) -> ShapedOptimum:
    """Re-optimize (xi, T_G) of an erf-edge pulse for minimum fidelity.

    Starts from a square-pulse candidate (xi0, t0) and maximizes the
    exact minimum fidelity of the extracted gate with a Nelder-Mead
    simplex over (xi, T_G in us); parameter tolerances 1e-4 in both
    scaled coordinates (0.1 ns in T_G).  The search integrates the
    envelope at `search_dt` (the slow gate amplitudes converge ~1e-9
    there); the returned optimum is re-evaluated at `verify_dt`.

    If the search cannot improve on the starting point, the starting
    point is returned flagged unimproved.
    """
    if p.shape != "erf":
        raise ValueError("optimize_shaped requires an erf-shaped pulse")
    omega = abs(p.omega)
    evaluations = [0]

    def fmin_at(xi: float, tg: float, dt: float) -> float:
        pulse = replace(p, delta=omega / xi, duration=tg)
        gate = simulate_gate(pulse, dt_max=dt, convergence_check=False)
        aligned, _ = align_global_phase(gate, target)
        return float(min_fidelity(aligned, target))

    def objective(x: np.ndarray) -> float:
        xi, tg_us = float(x[0]), float(x[1])
        if xi <= 0.05 or tg_us <= 0.01:
            return 1.0
        evaluations[0] += 1
        return -fmin_at(xi, tg_us * 1e-6, search_dt)

    x0 = np.array([xi0, t0 * 1e6])
    start_fmin = fmin_at(xi0, t0, search_dt)
    # erf edges only delay the effective pulse area, so seed the simplex
    # with a longer-duration vertex
    simplex = np.array([x0, x0 + [0.01, 0.0], x0 + [0.0, 0.05]])
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "xatol": 1e-4,
            "fatol": 1e-9,
            "maxfev": max_evaluations,
            "initial_simplex": simplex,
        },
    )
    xi_best, tg_best = float(res.x[0]), float(res.x[1]) * 1e-6
    fmin_best = fmin_at(xi_best, tg_best, verify_dt)
    if fmin_best < start_fmin:
        return ShapedOptimum(xi0, t0, start_fmin, False, start_fmin, evaluations[0])
    return ShapedOptimum(xi_best, tg_best, fmin_best, True, start_fmin, evaluations[0])
