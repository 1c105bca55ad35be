"""Right-hand side of the damped viscoelastic system in spectral space.

The model couples a velocity u (divergence-free) and a deformation tensor F
whose columns are advected by u and stretched by the velocity gradient:

    d/dt u_l = -(u . grad) u_l + F_ai d_a F_li - grad p + mu Lap u_l
    d/dt F_ij = -nu F_ij - (u . grad) F_ij + F_aj d_a u_i

with div u = 0 and div F^T = 0 (each column of F divergence-free; the
transport preserves this, so it is monitored rather than re-enforced).

:func:`compute_rhs` returns only the quadratic terms; the stiff linear
parts (-mu |k|^2 u and -nu F) are applied exactly by the integrator's
exponential factors.  Products are evaluated pointwise in physical space
from dealiased inputs and the results dealiased again, which keeps them
exact Galerkin truncations, so the energy-cancellation identities of the
continuous system hold discretely to rounding.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import backend, kernels
from .errors import BlowUpError, GridMismatchError
from .grid import Grid
from .spectral import SpectralField, _forward_arrays


@dataclass(frozen=True)
class PhysParams:
    """Kinematic viscosity mu > 0 and deformation damping coefficient nu >= 0.

    nu = 0 reproduces the undamped classical model; the damping-dependent
    diagnostics assume nu > 0.
    """

    mu: float = 1.0
    nu: float = 1.0

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")


@dataclass(frozen=True)
class State:
    """Simulation time plus spectral velocity (3,) and deformation tensor (3,3).

    ``u`` has shape (3, n, n, n//2+1); ``f_tensor`` has shape
    (3, 3, n, n, n//2+1) with entry [i, j] = F_ij (columns F[:, j] are the
    divergence-free directions).  Treated as immutable: operations return
    new states and never write into an input's arrays.
    """

    time: float
    u: np.ndarray
    f_tensor: np.ndarray
    grid: Grid

    @classmethod
    def zero(cls, grid: Grid, time: float = 0.0) -> "State":
        shape = grid.spectral_shape
        return cls(
            time=time,
            u=np.zeros((3,) + shape, dtype=np.complex128),
            f_tensor=np.zeros((3, 3) + shape, dtype=np.complex128),
            grid=grid,
        )

    def u_fields(self):
        return tuple(SpectralField(self.grid, self.u[i]) for i in range(3))

    def f_flat(self) -> np.ndarray:
        """View of the tensor as a stack of 9 row-major components."""
        return self.f_tensor.reshape((9,) + self.grid.spectral_shape)


@dataclass(frozen=True)
class Tendency:
    """Quadratic (nonlinear) tendencies; du is Leray-projected."""

    du: np.ndarray
    df: np.ndarray


class _Workspace:
    """Reusable per-grid scratch arrays for the RHS evaluation."""

    def __init__(self, grid: Grid):
        ns = grid.spectral_shape
        self.gu_spec = np.empty((9,) + ns, dtype=np.complex128)
        self.gfx_spec = np.empty((9,) + ns, dtype=np.complex128)
        self.gfy_spec = np.empty((9,) + ns, dtype=np.complex128)
        self.gfz_spec = np.empty((9,) + ns, dtype=np.complex128)
        n3 = grid.n_points**3
        self.du_phys = np.empty((3, n3))
        self.df_phys = np.empty((9, n3))


_tls = threading.local()


def _workspace(grid: Grid) -> _Workspace:
    cache = getattr(_tls, "cache", None)
    if cache is None:
        cache = _tls.cache = {}
    key = (grid.n_points, grid.box_length)
    ws = cache.get(key)
    if ws is None:
        ws = cache[key] = _Workspace(grid)
    return ws


def compute_rhs(state: State, params: PhysParams, include_nonlinear: bool = True) -> Tendency:
    """Quadratic tendencies of the system at ``state``.

    With ``include_nonlinear`` off, returns zero tendencies (the linear
    parts live in the integrator).  The velocity tendency is dealiased and
    Leray-projected; both tendencies have their k = 0 mode pinned to zero
    so the box mean carries no quadratic forcing.
    """
    g = state.grid
    ns = g.spectral_shape
    if state.u.shape != (3,) + ns or state.f_tensor.shape != (3, 3) + ns:
        raise GridMismatchError("state arrays do not match the state grid")
    if not include_nonlinear:
        return Tendency(
            du=np.zeros((3,) + ns, dtype=np.complex128),
            df=np.zeros((3, 3) + ns, dtype=np.complex128),
        )

    ws = _workspace(g)
    n = g.n_points
    n3 = n**3
    f_flat = state.f_flat()

    kernels.build_gradient_stacks(
        state.u, f_flat, g.kx, g.kz, ws.gu_spec, ws.gfx_spec, ws.gfy_spec, ws.gfz_spec
    )

    u_phys = backend.irfftn(state.u, n).reshape(3, n3)
    f_phys = backend.irfftn(f_flat, n).reshape(9, n3)
    gu_phys = backend.irfftn(ws.gu_spec, n).reshape(9, n3)
    gfx_phys = backend.irfftn(ws.gfx_spec, n).reshape(9, n3)
    gfy_phys = backend.irfftn(ws.gfy_spec, n).reshape(9, n3)
    gfz_phys = backend.irfftn(ws.gfz_spec, n).reshape(9, n3)

    kernels.nonlinear_products(
        u_phys, f_phys, gu_phys, gfx_phys, gfy_phys, gfz_phys, ws.du_phys, ws.df_phys
    )

    # inverse transforms above returned physical values scaled by 1/n^3, so
    # the products carry 1/n^6 and the series coefficients need one net n^3
    du = backend.rfftn(ws.du_phys.reshape(3, n, n, n)) * float(n3)
    df = backend.rfftn(ws.df_phys.reshape(9, n, n, n)) * float(n3)
    kernels.project_and_mask(du, df, g.kx, g.kz, g.inv_k2, g.dealias_maskf)

    # a NaN/Inf anywhere in the products poisons every mode of the forward
    # transform, so one retained mode per stack is a complete detector
    if not np.all(np.isfinite(du[:, 0, 0, 1])):
        raise BlowUpError(state.time, -1, "du")
    if not np.all(np.isfinite(df[:, 0, 0, 1])):
        raise BlowUpError(state.time, -1, "dF")
    return Tendency(du=du, df=df.reshape((3, 3) + ns))


def divergence_residuals(state: State) -> tuple:
    """Normalized divergence residuals (velocity, tensor columns).

    Velocity: max_k |k . u(k)| / max_k |u(k)|.  Tensor: the same per column
    F[:, j] (the column divergence d_i F_ij), worst column reported.  Zero
    fields give 0.
    """
    g = state.grid
    kxg = g.kx[:, None, None]
    kyg = g.kx[None, :, None]
    kzg = g.kz[None, None, :]

    def _resid(vec3) -> float:
        scale = float(np.max(np.abs(vec3)))
        if scale == 0.0:
            return 0.0
        div = kxg * vec3[0] + kyg * vec3[1] + kzg * vec3[2]
        return float(np.max(np.abs(div))) / scale

    res_u = _resid(state.u)
    res_f = max(_resid(state.f_tensor[:, j]) for j in range(3))
    return res_u, res_f


def solve_pressure(state: State) -> SpectralField:
    """Recover the pressure from the double divergences of u x u and F F^T.

    p(k) = (s_F(k) - s_u(k)) / |k|^2 with s_X = sum_ab k_a k_b X_ab(k), and
    p(0) = 0 (mean-pressure gauge).  Diagnostic only: the dynamics
    eliminate the pressure through the Leray projection, and for states
    satisfying both divergence constraints i k p(k) equals the part of the
    quadratic velocity tendency removed by that projection.
    """
    g = state.grid
    n = g.n_points
    n3 = n**3
    u_phys = backend.irfftn(state.u, n) * n3
    f_phys = backend.irfftn(state.f_flat(), n) * n3

    kg = (g.kx[:, None, None], g.kx[None, :, None], g.kz[None, None, :])
    s_u = np.zeros(g.spectral_shape, dtype=np.complex128)
    s_f = np.zeros(g.spectral_shape, dtype=np.complex128)
    for a in range(3):
        for b in range(a, 3):
            mult = 1.0 if a == b else 2.0
            uu = _forward_arrays(u_phys[a] * u_phys[b], g)
            s_u += mult * kg[a] * kg[b] * uu
            ff_ab = np.zeros(g.physical_shape)
            for m in range(3):
                ff_ab += f_phys[3 * a + m] * f_phys[3 * b + m]
            s_f += mult * kg[a] * kg[b] * _forward_arrays(ff_ab, g)

    p = (s_f - s_u) * g.inv_k2
    p[0, 0, 0] = 0.0
    p *= g.dealias_maskf
    return SpectralField(g, p)


def nonlinear_inner_products(state: State) -> dict:
    """Energy-budget inner products of the quadratic terms.

    Returns the three sums whose vanishing makes the discrete energy
    balance exact, each both raw and normalized by the l1 size of its
    summands:

    * ``advection_u``:   Re <(u.grad)u, u>
    * ``advection_f``:   sum_j Re <(u.grad)F_j, F_j>
    * ``exchange``:      Re <F_i.grad F_i, u> + sum_j Re <F_j.grad u, F_j>

    The first two vanish because div u = 0; the exchange sum vanishes
    because the tensor columns are divergence-free.
    """
    g = state.grid
    n = g.n_points
    n3 = float(n**3)
    ws = _workspace(g)
    f_flat = state.f_flat()
    kernels.build_gradient_stacks(
        state.u, f_flat, g.kx, g.kz, ws.gu_spec, ws.gfx_spec, ws.gfy_spec, ws.gfz_spec
    )
    u_phys = backend.irfftn(state.u, n).reshape(3, -1) * n3
    f_phys = backend.irfftn(f_flat, n).reshape(9, -1) * n3
    gu = backend.irfftn(ws.gu_spec, n).reshape(9, -1) * n3
    gf = [
        backend.irfftn(s, n).reshape(9, -1) * n3
        for s in (ws.gfx_spec, ws.gfy_spec, ws.gfz_spec)
    ]

    w = g.parseval_weights * g.volume

    def _inner(term_phys, against_spec):
        """Re <T, X> with T given physically; returns (sum, l1 of summands)."""
        t_hat = _forward_arrays(term_phys.reshape(n, n, n), g) * g.dealias_maskf
        summands = w * (np.conj(against_spec) * t_hat).real
        return float(np.sum(summands)), float(np.sum(np.abs(summands)))

    out = {}
    s = l1 = 0.0
    for i in range(3):
        adv = u_phys[0] * gu[3 * i + 0] + u_phys[1] * gu[3 * i + 1] + u_phys[2] * gu[3 * i + 2]
        v, a = _inner(adv, state.u[i])
        s += v
        l1 += a
    out["advection_u"] = (s, l1)

    s = l1 = 0.0
    for m in range(9):
        adv = u_phys[0] * gf[0][m] + u_phys[1] * gf[1][m] + u_phys[2] * gf[2][m]
        v, a = _inner(adv, f_flat[m])
        s += v
        l1 += a
    out["advection_f"] = (s, l1)

    s = l1 = 0.0
    for l in range(3):
        src = np.zeros_like(u_phys[0])
        for i in range(3):
            src += (
                f_phys[i] * gf[0][3 * l + i]
                + f_phys[3 + i] * gf[1][3 * l + i]
                + f_phys[6 + i] * gf[2][3 * l + i]
            )
        v, a = _inner(src, state.u[l])
        s += v
        l1 += a
    for i in range(3):
        for j in range(3):
            st = (
                f_phys[j] * gu[3 * i + 0]
                + f_phys[3 + j] * gu[3 * i + 1]
                + f_phys[6 + j] * gu[3 * i + 2]
            )
            v, a = _inner(st, f_flat[3 * i + j])
            s += v
            l1 += a
    out["exchange"] = (s, l1)
    return out
