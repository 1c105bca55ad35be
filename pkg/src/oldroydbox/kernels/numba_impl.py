"""Numba-compiled twins of the hot pointwise kernels.

Same signatures and layouts as ``numpy_impl``; see that module for the
index conventions.  All loops are serial (no prange) so results are
independent of thread count and bit-identical run to run.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_NJIT = dict(cache=True, fastmath=False)


@njit(**_NJIT)
def build_gradient_stacks(u, f, kx, kz, gu, gfx, gfy, gfz):
    nx, ny, nzr = u.shape[1], u.shape[2], u.shape[3]
    for ix in range(nx):
        kxv = kx[ix]
        for iy in range(ny):
            kyv = kx[iy]
            for iz in range(nzr):
                kzv = kz[iz]
                for i in range(3):
                    c = u[i, ix, iy, iz]
                    gu[3 * i + 0, ix, iy, iz] = 1j * (kxv * c)
                    gu[3 * i + 1, ix, iy, iz] = 1j * (kyv * c)
                    gu[3 * i + 2, ix, iy, iz] = 1j * (kzv * c)
                for m in range(9):
                    c = f[m, ix, iy, iz]
                    gfx[m, ix, iy, iz] = 1j * (kxv * c)
                    gfy[m, ix, iy, iz] = 1j * (kyv * c)
                    gfz[m, ix, iy, iz] = 1j * (kzv * c)


@njit(**_NJIT)
def nonlinear_products(u, f, gu, gfx, gfy, gfz, du, df):
    npoints = u.shape[1]
    for p in range(npoints):
        u0 = u[0, p]
        u1 = u[1, p]
        u2 = u[2, p]
        for l in range(3):
            adv = u0 * gu[3 * l + 0, p] + u1 * gu[3 * l + 1, p] + u2 * gu[3 * l + 2, p]
            src = 0.0
            for i in range(3):
                src += (
                    f[i, p] * gfx[3 * l + i, p]
                    + f[3 + i, p] * gfy[3 * l + i, p]
                    + f[6 + i, p] * gfz[3 * l + i, p]
                )
            du[l, p] = -adv + src
        for i in range(3):
            for j in range(3):
                m = 3 * i + j
                adv = u0 * gfx[m, p] + u1 * gfy[m, p] + u2 * gfz[m, p]
                st = (
                    f[j, p] * gu[3 * i + 0, p]
                    + f[3 + j, p] * gu[3 * i + 1, p]
                    + f[6 + j, p] * gu[3 * i + 2, p]
                )
                df[m, p] = -adv + st


@njit(**_NJIT)
def project_and_mask(du, df, kx, kz, inv_k2, maskf):
    nx, ny, nzr = du.shape[1], du.shape[2], du.shape[3]
    for ix in range(nx):
        kxv = kx[ix]
        for iy in range(ny):
            kyv = kx[iy]
            for iz in range(nzr):
                kzv = kz[iz]
                msk = maskf[ix, iy, iz]
                d0 = du[0, ix, iy, iz] * msk
                d1 = du[1, ix, iy, iz] * msk
                d2 = du[2, ix, iy, iz] * msk
                div = (kxv * d0 + kyv * d1 + kzv * d2) * inv_k2[ix, iy, iz]
                du[0, ix, iy, iz] = d0 - kxv * div
                du[1, ix, iy, iz] = d1 - kyv * div
                du[2, ix, iy, iz] = d2 - kzv * div
                for m in range(9):
                    df[m, ix, iy, iz] = df[m, ix, iy, iz] * msk
    for c in range(3):
        du[c, 0, 0, 0] = 0.0
    for m in range(9):
        df[m, 0, 0, 0] = 0.0


@njit(**_NJIT)
def combine_af(out, fac, y, c, k):
    nc = out.shape[0]
    nx, ny, nzr = out.shape[1], out.shape[2], out.shape[3]
    for comp in range(nc):
        for ix in range(nx):
            for iy in range(ny):
                for iz in range(nzr):
                    out[comp, ix, iy, iz] = fac[ix, iy, iz] * (
                        y[comp, ix, iy, iz] + c * k[comp, ix, iy, iz]
                    )


@njit(**_NJIT)
def combine_sf(out, s, y, c, k):
    flat_o = out.reshape(-1)
    flat_y = y.reshape(-1)
    flat_k = k.reshape(-1)
    for p in range(flat_o.size):
        flat_o[p] = s * (flat_y[p] + c * flat_k[p])


@njit(**_NJIT)
def axpb_af(out, fac, y, c, k):
    nc = out.shape[0]
    nx, ny, nzr = out.shape[1], out.shape[2], out.shape[3]
    for comp in range(nc):
        for ix in range(nx):
            for iy in range(ny):
                for iz in range(nzr):
                    out[comp, ix, iy, iz] = (
                        fac[ix, iy, iz] * y[comp, ix, iy, iz] + c * k[comp, ix, iy, iz]
                    )


@njit(**_NJIT)
def axpb_sf(out, s, y, c, k):
    flat_o = out.reshape(-1)
    flat_y = y.reshape(-1)
    flat_k = k.reshape(-1)
    for p in range(flat_o.size):
        flat_o[p] = s * flat_y[p] + c * flat_k[p]


@njit(**_NJIT)
def axpb2_af(out, fac1, y, c, fac2, k):
    nc = out.shape[0]
    nx, ny, nzr = out.shape[1], out.shape[2], out.shape[3]
    for comp in range(nc):
        for ix in range(nx):
            for iy in range(ny):
                for iz in range(nzr):
                    out[comp, ix, iy, iz] = fac1[ix, iy, iz] * y[comp, ix, iy, iz] + c * (
                        fac2[ix, iy, iz] * k[comp, ix, iy, iz]
                    )


@njit(**_NJIT)
def final_af(out, fac_full, fac_half, y, k1, k2, k3, k4, dt):
    nc = out.shape[0]
    nx, ny, nzr = out.shape[1], out.shape[2], out.shape[3]
    w = dt / 6.0
    for comp in range(nc):
        for ix in range(nx):
            for iy in range(ny):
                for iz in range(nzr):
                    ff = fac_full[ix, iy, iz]
                    fh = fac_half[ix, iy, iz]
                    out[comp, ix, iy, iz] = ff * y[comp, ix, iy, iz] + w * (
                        ff * k1[comp, ix, iy, iz]
                        + 2.0 * (fh * (k2[comp, ix, iy, iz] + k3[comp, ix, iy, iz]))
                        + k4[comp, ix, iy, iz]
                    )


@njit(**_NJIT)
def final_sf(out, s_full, s_half, y, k1, k2, k3, k4, dt):
    flat_o = out.reshape(-1)
    flat_y = y.reshape(-1)
    f1 = k1.reshape(-1)
    f2 = k2.reshape(-1)
    f3 = k3.reshape(-1)
    f4 = k4.reshape(-1)
    w = dt / 6.0
    for p in range(flat_o.size):
        flat_o[p] = s_full * flat_y[p] + w * (
            s_full * f1[p] + 2.0 * (s_half * (f2[p] + f3[p])) + f4[p]
        )
