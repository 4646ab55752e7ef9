"""Experiment orchestration: convergence studies, the linearized
intermediate-problem diagnostic, and soliton propagation benchmarks.

All studies measure against a self-computed reference run at a bandwidth
at least four times the finest measured one and a step four times smaller,
which keeps the reference error well below every measured error.  Member
runs are independent and may execute on a small thread pool (capped by the
BENJ_THREADS environment variable); reports are assembled in bandwidth
order, so results do not depend on scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DivergenceError
from .initdata import InitialDataSpec, build_field, kdv_soliton
from .invariants import InvariantRecord, record_invariants
from .model import ModelParams
from .semidiscrete import frozen_nonlinear_term
from .spectral import SpectralField, embed, l2_norm, linf_norm, peak_position, project, translate
from .timestep import IntegratorConfig, default_dt, evolve

_ERROR_FLOOR = 1e-300


@dataclass(frozen=True)
class IntegratorPolicy:
    """Time-stepping choices shared by the member runs of a study.

    ``dt`` is the step of the measured runs (None derives it from the
    finest measured bandwidth); it is snapped so an integer number of steps
    lands exactly on the horizon, and the reference run uses dt/4.
    """

    method: str = "etdrk4"
    dt: Optional[float] = None


@dataclass
class ConvergenceReport:
    n_values: list
    errors: list
    fitted_rate: Optional[float]
    fit_r2: Optional[float]
    reference_n: int
    t_star: float
    dt: float
    failures: dict = field(default_factory=dict)
    w_linf_max: Optional[list] = None


@dataclass
class SolitonReport:
    speed_target: float
    speed_estimate: Optional[float]
    shape_error_linf: float
    drifts: InvariantRecord
    times: np.ndarray
    peak_positions: np.ndarray


def estimate_rate(n_values, errors) -> tuple[float, float]:
    """Least-squares slope of log(error) against log(N), negated.

    Returns (rate, r2).  A perfect algebraic decay error = C*N^(-p) gives
    rate p exactly with r2 = 1; constant errors give rate 0 (and r2 = 1,
    the fit being exact).  Requires at least two strictly positive errors.
    """
    n_values = np.asarray(n_values, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(n_values) < 2 or len(n_values) != len(errors):
        raise ValueError("need at least two (N, error) pairs of equal length")
    if np.any(errors <= 0.0) or not np.all(np.isfinite(errors)):
        raise ValueError("errors must be positive and finite to fit a rate")
    x, y = np.log(n_values), np.log(errors)
    slope, intercept = np.polyfit(x, y, 1)
    fit = slope * x + intercept
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(-slope), r2


def _fit_tail(n_values, errors, window: int = 4):
    """Fit the rate over the largest `window` bandwidths with usable errors."""
    pairs = [
        (n, e)
        for n, e in zip(n_values, errors)
        if np.isfinite(e) and e > _ERROR_FLOOR
    ]
    if len(pairs) < 2:
        return None, None
    tail = pairs[-window:]
    return estimate_rate([n for n, _ in tail], [e for _, e in tail])


def _resolve_workers(n_jobs: int) -> int:
    raw = os.environ.get("BENJ_THREADS", "").strip()
    workers = int(raw) if raw else 0
    if workers <= 0:
        workers = os.cpu_count() or 1
    return max(1, min(workers, n_jobs))


def _parallel_map(fn, items):
    workers = _resolve_workers(len(items))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _snap_dt(t_star: float, dt_target: float) -> tuple[float, int]:
    """Largest dt <= target such that an integer number of steps spans t_star."""
    n_steps = max(1, math.ceil(t_star / dt_target - 1e-9))
    return t_star / n_steps, n_steps


def _check_study_inputs(n_values, n_ref, t_star):
    n_values = sorted(int(n) for n in n_values)
    if len(set(n_values)) != len(n_values):
        raise ValueError("n_values must be distinct")
    if n_ref < 4 * max(n_values):
        raise ValueError(
            f"reference bandwidth {n_ref} must be at least 4x the finest "
            f"measured bandwidth {max(n_values)}"
        )
    if t_star <= 0:
        raise ValueError(f"t_star must be > 0, got {t_star}")
    return n_values


def self_convergence(
    params: ModelParams,
    data_spec: InitialDataSpec,
    n_values,
    n_ref: int,
    t_star: float,
    integrator_policy: Optional[IntegratorPolicy] = None,
    track_max: bool = False,
) -> ConvergenceReport:
    """L2 errors of bandwidth-N runs against a fine reference at t_star.

    The initial datum is built once at the reference bandwidth and
    projected down for each member run, and fields are compared at the
    reference bandwidth (the coarser one zero-extended), so the reported
    error includes the projection tail.  By default the error is the
    final-time value, a lower bound for the max over [0, t_star];
    ``track_max`` compares at ~32 aligned snapshot times instead.
    """
    n_values = _check_study_inputs(n_values, n_ref, t_star)
    policy = integrator_policy or IntegratorPolicy()
    dt_target = policy.dt if policy.dt is not None else default_dt(params, max(n_values))
    dt, n_steps = _snap_dt(t_star, dt_target)

    u0_ref = build_field(data_spec, params, n_ref)
    stride = max(1, n_steps // 32) if track_max else n_steps
    ref_config = IntegratorConfig(policy.method, dt / 4.0, t_star, 4 * stride)
    ref_result = evolve(u0_ref, params, ref_config)
    ref_states = {round(t / dt, 6): f for t, f in ref_result.snapshots}

    def run_one(n: int):
        u0 = project(u0_ref, n)
        config = IntegratorConfig(policy.method, dt, t_star, stride)
        try:
            result = evolve(u0, params, config)
        except DivergenceError as exc:
            return np.nan, f"diverged: {exc}"
        errors_t = []
        for t, f in result.snapshots:
            ref = ref_states.get(round(t / dt, 6))
            if ref is not None:
                diff = ref.coeffs - embed(f, n_ref).coeffs
                errors_t.append(l2_norm(ref.with_coeffs(diff)))
        return max(errors_t), None

    outcomes = _parallel_map(run_one, n_values)
    errors, failures = [], {}
    for n, (err, fail) in zip(n_values, outcomes):
        errors.append(err)
        if fail:
            failures[n] = fail

    rate, r2 = _fit_tail(n_values, errors)
    return ConvergenceReport(
        n_values=n_values,
        errors=errors,
        fitted_rate=rate,
        fit_r2=r2,
        reference_n=n_ref,
        t_star=t_star,
        dt=dt,
        failures=failures,
    )


class _SteppedTrajectory:
    """Cubic-in-time interpolant over states stored at every reference step."""

    def __init__(self, times_count: int, dt: float, states: np.ndarray):
        self.dt = dt
        self.states = states  # (times_count, modes) complex
        self.count = times_count

    def at(self, t: float) -> np.ndarray:
        pos = t / self.dt
        i0 = int(math.floor(pos + 1e-9))
        i0 = min(max(i0, 0), self.count - 1)
        frac = pos - i0
        if abs(frac) < 1e-8:
            return self.states[i0]
        if abs(frac - 1.0) < 1e-8:
            return self.states[min(i0 + 1, self.count - 1)]
        if self.count < 4:
            nxt = min(i0 + 1, self.count - 1)
            return (1.0 - frac) * self.states[i0] + frac * self.states[nxt]
        start = min(max(i0 - 1, 0), self.count - 4)
        xi = pos - start
        nodes = np.arange(4.0)
        weights = np.ones(4)
        for a in range(4):
            for b in range(4):
                if a != b:
                    weights[a] *= (xi - nodes[b]) / (nodes[a] - nodes[b])
        return np.tensordot(weights, self.states[start : start + 4], axes=1)


def intermediate_problem_study(
    params: ModelParams,
    data_spec: InitialDataSpec,
    n_values,
    n_ref: int,
    t_star: float,
    integrator_policy: Optional[IntegratorPolicy] = None,
) -> ConvergenceReport:
    """Decay of ||u - w^N|| for the advection-frozen linearized systems.

    A reference trajectory is stored at every integrator step; each w-run
    reuses that exact step size, freezing the advection coefficient at the
    reference solution projected to bandwidth (1+q)N and interpolated
    cubically at stage midpoints.  The sup norm of each w-run is monitored
    and reported alongside the error decay.
    """
    n_values = _check_study_inputs(n_values, n_ref, t_star)
    policy = integrator_policy or IntegratorPolicy()
    dt_target = policy.dt if policy.dt is not None else default_dt(params, max(n_values))
    dt_measure, _ = _snap_dt(t_star, dt_target)
    dt = dt_measure / 4.0

    u0_ref = build_field(data_spec, params, n_ref)
    n_keep = (1 + params.q) * max(n_values)
    store = [project(u0_ref, n_keep).coeffs]
    ref_config = IntegratorConfig(policy.method, dt, t_star, 1)
    ref_result = evolve(
        u0_ref, params, ref_config,
        observer=lambda t, f: store.append(project(f, n_keep).coeffs),
        record_snapshots=False,
    )
    n_steps = ref_result.n_steps
    stored = np.array(store)
    u_ref_final = ref_result.final

    def run_one(n: int):
        n_u = (1 + params.q) * n
        lo = n_keep - n_u
        traj = _SteppedTrajectory(n_steps + 1, dt, stored[:, lo : lo + 2 * n_u + 1])
        term = frozen_nonlinear_term(params, n, n_u)
        nonlinear = lambda c, t: term(traj.at(t), c)
        w0 = project(u0_ref, n)
        stride = max(1, n_steps // 128)
        config = IntegratorConfig(policy.method, dt, t_star, stride)
        try:
            result = evolve(w0, params, config, nonlinear=nonlinear)
        except DivergenceError as exc:
            return np.nan, np.nan, f"diverged: {exc}"
        linf_values = [linf_norm(w0)] + [linf_norm(f) for _, f in result.snapshots]
        diff = u_ref_final.coeffs - embed(result.final, n_ref).coeffs
        return l2_norm(u_ref_final.with_coeffs(diff)), max(linf_values), None

    outcomes = _parallel_map(run_one, n_values)
    errors, linf_max, failures = [], [], {}
    for n, (err, wmax, fail) in zip(n_values, outcomes):
        errors.append(err)
        linf_max.append(wmax)
        if fail:
            failures[n] = fail

    rate, r2 = _fit_tail(n_values, errors)
    return ConvergenceReport(
        n_values=n_values,
        errors=errors,
        fitted_rate=rate,
        fit_r2=r2,
        reference_n=n_ref,
        t_star=t_star,
        dt=dt,
        failures=failures,
        w_linf_max=linf_max,
    )


def soliton_propagation_test(
    speed: float,
    params: ModelParams,
    n_modes: int,
    t_star: float,
    dt: Optional[float] = None,
    profile: Optional[SpectralField] = None,
    method: str = "etdrk4",
) -> SolitonReport:
    """Propagate a traveling wave and measure its speed and shape fidelity.

    The profile defaults to the closed-form solitary wave of the gamma = 0,
    m = 1, q = 1 reduction; a converged fixed-point profile may be passed
    instead.  Speed is the slope of a linear fit through the unwrapped peak
    trajectory; the shape error is the sup-norm mismatch after translating
    the final state back by the measured displacement.
    """
    u0 = profile if profile is not None else kdv_soliton(speed, 0.0, params, n_modes)
    period = 2.0 * params.domain_scale * np.pi
    if t_star == 0.0:
        drifts = record_invariants([(0.0, u0)], params)
        return SolitonReport(
            speed_target=speed,
            speed_estimate=None,
            shape_error_linf=0.0,
            drifts=drifts,
            times=np.array([0.0]),
            peak_positions=np.array([peak_position(u0)]),
        )

    dt_target = dt if dt is not None else min(default_dt(params, n_modes), t_star)
    dt_run, n_steps = _snap_dt(t_star, dt_target)
    stride = max(1, n_steps // 200)
    config = IntegratorConfig(method, dt_run, t_star, stride)
    result = evolve(u0, params, config)

    snapshots = [(0.0, u0)] + result.snapshots
    times = np.array([t for t, _ in snapshots])
    raw = np.array([peak_position(f) for _, f in snapshots])
    unwrapped = raw.copy()
    for i in range(1, len(unwrapped)):
        jump = unwrapped[i] - unwrapped[i - 1]
        unwrapped[i] -= period * np.round(jump / period)
    speed_estimate = float(np.polyfit(times, unwrapped, 1)[0])

    shift = float(unwrapped[-1] - unwrapped[0])
    realigned = translate(result.final, -shift)
    mismatch = realigned.with_coeffs(realigned.coeffs - u0.coeffs)
    return SolitonReport(
        speed_target=speed,
        speed_estimate=speed_estimate,
        shape_error_linf=linf_norm(mismatch),
        drifts=record_invariants(snapshots, params),
        times=times,
        peak_positions=unwrapped,
    )
