"""Pure-numpy implementations of the hot pointwise kernels.

Reference semantics for the numba twins in ``numba_impl``; selected at
import time via ``OLDROYDBOX_KERNELS=numpy``.  Expression order matches the
numba versions so both paths agree to the last bit on elementwise work.

Layout conventions (shared by both backends):

* velocity stacks: index ``i`` = component;
* tensor stacks of 9: row-major, index ``3*i + j`` = entry (i, j);
* gradient stack ``gu``: index ``3*i + a`` = d_a u_i;
* per-axis tensor gradients ``gfx/gfy/gfz``: index ``3*i + j`` = d_x F_ij etc.
"""

from __future__ import annotations

import numpy as np


def build_gradient_stacks(u, f, kx, kz, gu, gfx, gfy, gfz):
    """Fill spectral gradient stacks with i*k_a times the input fields."""
    ikx = 1j * kx[:, None, None]
    iky = 1j * kx[None, :, None]
    ikz = 1j * kz[None, None, :]
    for i in range(3):
        gu[3 * i + 0] = ikx * u[i]
        gu[3 * i + 1] = iky * u[i]
        gu[3 * i + 2] = ikz * u[i]
    for m in range(9):
        gfx[m] = ikx * f[m]
        gfy[m] = iky * f[m]
        gfz[m] = ikz * f[m]


def nonlinear_products(u, f, gu, gfx, gfy, gfz, du, df):
    """Physical-space quadratic terms of the coupled system.

    du_l = -(u . grad) u_l + F_ai d_a F_li   (convective advection plus
    df_ij = -(u . grad) F_ij + F_aj d_a u_i   tensor stretching)
    """
    for l in range(3):
        adv = u[0] * gu[3 * l + 0] + u[1] * gu[3 * l + 1] + u[2] * gu[3 * l + 2]
        src = np.zeros_like(adv)
        for i in range(3):
            src += f[i] * gfx[3 * l + i] + f[3 + i] * gfy[3 * l + i] + f[6 + i] * gfz[3 * l + i]
        du[l] = -adv + src
    for i in range(3):
        for j in range(3):
            m = 3 * i + j
            adv = u[0] * gfx[m] + u[1] * gfy[m] + u[2] * gfz[m]
            st = f[j] * gu[3 * i + 0] + f[3 + j] * gu[3 * i + 1] + f[6 + j] * gu[3 * i + 2]
            df[m] = -adv + st


def project_and_mask(du, df, kx, kz, inv_k2, maskf):
    """Dealias both tendencies, Leray-project du, zero the k = 0 modes."""
    du *= maskf
    df *= maskf
    kxg = kx[:, None, None]
    kyg = kx[None, :, None]
    kzg = kz[None, None, :]
    div = (kxg * du[0] + kyg * du[1] + kzg * du[2]) * inv_k2
    du[0] -= kxg * div
    du[1] -= kyg * div
    du[2] -= kzg * div
    du[..., 0, 0, 0] = 0.0
    df[..., 0, 0, 0] = 0.0


def combine_af(out, fac, y, c, k):
    """out = fac * (y + c * k), real factor array broadcast over components."""
    out[:] = fac * (y + c * k)


def combine_sf(out, s, y, c, k):
    """out = s * (y + c * k), scalar factor."""
    out[:] = s * (y + c * k)


def axpb_af(out, fac, y, c, k):
    """out = fac * y + c * k, real factor array broadcast over components."""
    out[:] = fac * y + c * k


def axpb_sf(out, s, y, c, k):
    """out = s * y + c * k, scalar factor."""
    out[:] = s * y + c * k


def axpb2_af(out, fac1, y, c, fac2, k):
    """out = fac1 * y + c * (fac2 * k), two factor arrays."""
    out[:] = fac1 * y + c * (fac2 * k)


def final_af(out, fac_full, fac_half, y, k1, k2, k3, k4, dt):
    """Classical four-stage combination with exact linear propagators."""
    out[:] = fac_full * y + (dt / 6.0) * (
        fac_full * k1 + 2.0 * (fac_half * (k2 + k3)) + k4
    )


def final_sf(out, s_full, s_half, y, k1, k2, k3, k4, dt):
    out[:] = s_full * y + (dt / 6.0) * (
        s_full * k1 + 2.0 * (s_half * (k2 + k3)) + k4
    )
