"""Time stepping: exact exponential factors for the stiff linear terms,
classical four-stage Runge-Kutta for the quadratic terms.

Per mode the viscous and damping parts are integrated exactly with the
propagators exp(-mu |k|^2 dt) and exp(-nu dt); with the nonlinearity off a
step is therefore exact to rounding regardless of dt.  The velocity stays
divergence-free because every stage tendency is Leray-projected and the
propagators act mode by mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp

import numpy as np

from . import backend, kernels
from .errors import BlowUpError
from .system import PhysParams, State, Tendency, compute_rhs


@dataclass(frozen=True)
class StepControl:
    """Fixed-step control parameters.

    ``dt_cap`` is the advisory ceiling used by :func:`suggest_dt`;
    ``nan_check_interval`` is the step period of the full finiteness scan.
    """

    dt: float = 0.01
    cfl_safety: float = 0.9
    max_steps: int = 10_000_000
    nan_check_interval: int = 1
    dt_cap: float = 0.1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.nan_check_interval < 1:
            raise ValueError("nan_check_interval must be positive")
        if not self.dt_cap > 0:
            raise ValueError("dt_cap must be positive")


def _half_factor_u(grid, params, dt):
    return np.exp((-0.5 * params.mu * dt) * grid.k2)


def step(state: State, params: PhysParams, dt: float, include_nonlinear: bool = True) -> State:
    """Advance one step of size dt with the integrating-factor scheme."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    g = state.grid
    eh_u = _half_factor_u(g, params, dt)
    ef_u = eh_u * eh_u
    eh_f = exp(-0.5 * params.nu * dt)
    ef_f = eh_f * eh_f

    if not include_nonlinear:
        new_u = np.empty_like(state.u)
        new_f = np.empty_like(state.f_tensor)
        kernels.axpb_af(new_u, ef_u, state.u, 0.0, state.u)
        kernels.axpb_sf(new_f, ef_f, state.f_tensor, 0.0, state.f_tensor)
        return State(time=state.time + dt, u=new_u, f_tensor=new_f, grid=g)

    y_u, y_f = state.u, state.f_tensor
    half = 0.5 * dt

    k1 = compute_rhs(state, params)

    s_u = np.empty_like(y_u)
    s_f = np.empty_like(y_f)
    kernels.combine_af(s_u, eh_u, y_u, half, k1.du)
    kernels.combine_sf(s_f, eh_f, y_f, half, k1.df)
    k2 = compute_rhs(State(state.time + half, s_u, s_f, g), params)

    kernels.axpb_af(s_u, eh_u, y_u, half, k2.du)
    kernels.axpb_sf(s_f, eh_f, y_f, half, k2.df)
    k3 = compute_rhs(State(state.time + half, s_u, s_f, g), params)

    kernels.axpb2_af(s_u, ef_u, y_u, dt, eh_u, k3.du)
    kernels.axpb_sf(s_f, ef_f, y_f, dt * eh_f, k3.df)
    k4 = compute_rhs(State(state.time + dt, s_u, s_f, g), params)

    new_u = s_u
    new_f = s_f
    kernels.final_af(new_u, ef_u, eh_u, y_u, k1.du, k2.du, k3.du, k4.du, dt)
    kernels.final_sf(new_f, ef_f, eh_f, y_f, k1.df, k2.df, k3.df, k4.df, dt)
    return State(time=state.time + dt, u=new_u, f_tensor=new_f, grid=g)


def check_finite(state: State, step_index: int) -> None:
    """Full finiteness scan of a state; raises :class:`BlowUpError`."""
    if not np.all(np.isfinite(state.u.view(np.float64))):
        raise BlowUpError(state.time, step_index, "u")
    if not np.all(np.isfinite(state.f_tensor.view(np.float64))):
        raise BlowUpError(state.time, step_index, "F")


def suggest_dt(state: State, params: PhysParams, control: StepControl) -> float:
    """Advisory advective step bound; never exceeds control.dt.

    dt = cfl_safety * min(dx / (max|u| + max|F| + tiny), dt_cap), capped at
    control.dt.  The stiff linear terms do not constrain dt (their factors
    are exact), so only the advective scale enters.
    """
    g = state.grid
    n = g.n_points
    n3 = float(n**3)
    u_phys = backend.irfftn(state.u, n) * n3
    f_phys = backend.irfftn(state.f_flat(), n) * n3
    vmax = float(np.max(np.abs(u_phys)))
    fmax = float(np.max(np.abs(f_phys)))
    tiny = 1e-30
    bound = g.dx / (vmax + fmax + tiny)
    return min(control.cfl_safety * min(bound, control.dt_cap), control.dt)


def evolve(
    state: State,
    params: PhysParams,
    control: StepControl,
    t_end: float,
    sample_times,
    sink=None,
    include_nonlinear: bool = True,
) -> State:
    """March to t_end, landing exactly on every sample time.

    ``sample_times`` must be sorted and lie within [state.time, t_end]; the
    final substep before each sample (and before t_end) is shortened so the
    sample state carries the exact requested time.  ``sink(state)`` is
    invoked at each sample time, including a sample equal to the initial
    time.  Deterministic for fixed inputs.
    """
    samples = [float(t) for t in sample_times]
    if any(b <= a for a, b in zip(samples, samples[1:])):
        raise ValueError("sample_times must be strictly increasing")
    if t_end < state.time:
        raise ValueError("t_end precedes the state time")
    if samples and (samples[0] < state.time or samples[-1] > t_end):
        raise ValueError("sample_times must lie within [state.time, t_end]")

    steps_taken = 0
    targets = [(t, True) for t in samples]
    if not samples or samples[-1] != t_end:
        targets.append((t_end, False))

    for target, is_sample in targets:
        eps = 1e-12 * max(1.0, abs(target))
        while target - state.time > eps:
            dt_step = min(control.dt, target - state.time)
            if steps_taken >= control.max_steps:
                raise RuntimeError(f"max_steps={control.max_steps} exceeded")
            state = step(state, params, dt_step, include_nonlinear)
            steps_taken += 1
            if steps_taken % control.nan_check_interval == 0:
                check_finite(state, steps_taken)
        # the last substep used dt = (target - time), so only float
        # accumulation separates state.time from the target: snap it
        state = State(time=target, u=state.u, f_tensor=state.f_tensor, grid=state.grid)
        if is_sample and sink is not None:
            sink(state)
    return state
