"""Per-sample diagnostics: norms, dissipation, low-frequency shell masses
and the pointwise spectral amplitude-bound ratios.

The recorded quantities shadow the analytic structure of the model:

* the energy balance d/dt(|u|^2 + |F|^2) + 2 nu |F|^2 + 2 mu |grad u|^2 = 0,
  checked a posteriori by :func:`energy_identity_residual`;
* monotone decay of the order-m Sobolev energy for small data,
  :func:`hm_monotonicity_violation`;
* frequency-splitting masses below the shrinking radius
  g(t) = sqrt(gamma / (t + 1));
* the mode-wise bounds |u(k, t)| <= C (|u0(k)| + 1/|k|) and
  |F(k, t)| <= C (|F0(k)| + |k|), whose smallest validating constants are
  extracted by :func:`spectral_bound_constants`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError
from .system import PhysParams, State


@dataclass(frozen=True)
class SplittingSchedule:
    """Shrinking frequency-splitting radius g(t) = sqrt(gamma / (t + 1))."""

    gamma: float = 4.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    def g(self, t: float) -> float:
        return float(np.sqrt(self.gamma / (t + 1.0)))


@dataclass(frozen=True)
class TimeSeriesRecord:
    time: float
    l2_u_sq: float
    l2_f_sq: float
    hm_sq: tuple  # hm_sq[j] = |grad^j u|^2 + |grad^j F|^2, j = 0..m
    dissipation_u: float  # 2 mu |grad u|^2
    damping_f: float  # 2 nu |F|^2
    shell_mass_u: float
    shell_mass_f: float
    ratio_u: float
    ratio_f: float


def _vector_amp(stack: np.ndarray) -> np.ndarray:
    """Euclidean modulus across the leading component axes, per mode."""
    flat = stack.reshape((-1,) + stack.shape[-3:])
    return np.sqrt(np.sum(flat.real**2 + flat.imag**2, axis=0))


def record(
    state: State,
    params: PhysParams,
    schedule: SplittingSchedule,
    initial_state: State,
    m_order: int = 3,
) -> TimeSeriesRecord:
    """Evaluate every monitored quantity of one state.

    ``initial_state`` supplies the t = 0 spectrum entering the bound-ratio
    denominators; it must share the grid.
    """
    g = state.grid
    if not g.same_as(initial_state.grid):
        raise GridMismatchError("state and initial_state grids differ")

    w = g.parseval_weights
    vol = g.volume
    abs2_u = state.u.real**2 + state.u.imag**2
    abs2_f = state.f_tensor.real**2 + state.f_tensor.imag**2
    sum_u = abs2_u.sum(axis=0)
    sum_f = abs2_f.sum(axis=(0, 1))

    l2_u = vol * float(np.sum(w * sum_u))
    l2_f = vol * float(np.sum(w * sum_f))
    both = sum_u + sum_f
    hm = []
    k2j = np.ones_like(g.k2)
    for j in range(m_order + 1):
        if j == 0:
            hm.append(vol * float(np.sum(w * both)))
        else:
            k2j = k2j * g.k2
            hm.append(vol * float(np.sum(w * k2j * both)))
    grad_u_sq = vol * float(np.sum(w * g.k2 * sum_u))

    shell = g.k_mag <= schedule.g(state.time)
    shell_u = vol * float(np.sum(w * sum_u, where=shell))
    shell_f = vol * float(np.sum(w * sum_f, where=shell))

    amp_u = _vector_amp(state.u)
    amp_u0 = _vector_amp(initial_state.u)
    nonzero_k = g.k_mag > 0
    denom_u = amp_u0 + np.divide(1.0, g.k_mag, out=np.ones_like(amp_u0), where=nonzero_k)
    ratio_u = float(
        np.max(np.divide(amp_u, denom_u, out=np.zeros_like(amp_u), where=nonzero_k))
    )

    amp_f = _vector_amp(state.f_tensor)
    amp_f0 = _vector_amp(initial_state.f_tensor)
    denom_f = amp_f0 + g.k_mag
    valid_f = nonzero_k | (amp_f0 > 0)
    ratio_f = float(
        np.max(np.divide(amp_f, denom_f, out=np.zeros_like(amp_f), where=valid_f))
    )

    return TimeSeriesRecord(
        time=state.time,
        l2_u_sq=l2_u,
        l2_f_sq=l2_f,
        hm_sq=tuple(hm),
        dissipation_u=2.0 * params.mu * grad_u_sq,
        damping_f=2.0 * params.nu * l2_f,
        shell_mass_u=shell_u,
        shell_mass_f=shell_f,
        ratio_u=ratio_u,
        ratio_f=ratio_f,
    )


def energy_identity_residual(records) -> tuple:
    """Residual of the energy balance on the sampled series.

    For each interior sample, the time derivative of E = |u|^2 + |F|^2 is
    approximated by the centered three-point difference on the (possibly
    non-uniform) sample grid and added to the recorded damping and
    dissipation.  Returns (times, residuals) over the interior samples; for
    a converged run the result is O(sample spacing^2) + O(dt^4).
    """
    records = list(records)
    if len(records) < 3:
        raise ValueError("need at least 3 records at distinct times")
    t = np.array([r.time for r in records])
    e = np.array([r.l2_u_sq + r.l2_f_sq for r in records])
    s = np.array([r.damping_f + r.dissipation_u for r in records])

    tm, t0, tp = t[:-2], t[1:-1], t[2:]
    em, e0, ep = e[:-2], e[1:-1], e[2:]
    # derivative of the quadratic through the three points, at the center
    dedt = (
        em * (t0 - tp) / ((tm - t0) * (tm - tp))
        + e0 * (2.0 * t0 - tm - tp) / ((t0 - tm) * (t0 - tp))
        + ep * (t0 - tm) / ((tp - tm) * (tp - t0))
    )
    return t0, dedt + s[1:-1]


def hm_monotonicity_violation(records, order: int) -> float:
    """Largest positive increase of the order-m Sobolev energy between
    consecutive samples, normalized by its initial value (0 = monotone)."""
    records = list(records)
    if any(len(r.hm_sq) < order + 1 for r in records):
        raise ValueError(f"records do not carry hm_sq up to order {order}")
    total = np.array([sum(r.hm_sq[: order + 1]) for r in records])
    if total[0] == 0.0:
        return 0.0
    increases = np.diff(total)
    worst = float(np.max(increases, initial=0.0))
    return max(worst, 0.0) / float(total[0])


def spectral_bound_constants(records) -> tuple:
    """Smallest constants validating the mode-wise amplitude bounds over a
    run: (max_t ratio_u, max_t ratio_f)."""
    records = list(records)
    if not records:
        raise ValueError("empty record series")
    return (
        max(r.ratio_u for r in records),
        max(r.ratio_f for r in records),
    )
