"""Spectral representation of real periodic fields and spectral calculus.

All public operations act on :class:`SpectralField` (one real scalar field
in half-spectrum storage) or short tuples of them.  Array-level helpers
(prefixed ``_``) back the hot paths in :mod:`oldroydbox.system` without the
wrapper type.

See :mod:`oldroydbox.grid` for the Fourier and Parseval conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DegenerateProfileError, GridMismatchError, SymmetryError
from .grid import Grid

PROFILE_SHAPES = ("flat_low_k_gaussian_cutoff", "single_mode", "ring")


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients of one real scalar field on a grid."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.spectral_shape:
            raise GridMismatchError(
                f"coefficient shape {self.coeffs.shape} does not match grid "
                f"spectral shape {self.grid.spectral_shape}"
            )


@dataclass(frozen=True)
class SpectrumProfile:
    """Radial amplitude recipe for seeded random field generation.

    ``flat_low_k_gaussian_cutoff`` has amplitude ``A * exp(-|k|^2 / (2 c^2))``
    with ``c = cutoff_k``: flat near k = 0 (zero slope, bounded and
    nonvanishing at the origin) with a Gaussian roll-off at scale ``c``.
    ``single_mode`` excites the lattice shell closest to ``cutoff_k``;
    ``ring`` excites shells within one ``k_min`` of ``cutoff_k``.
    """

    shape: str
    cutoff_k: float
    target_l2_norm: float
    seed: int

    def __post_init__(self):
        if self.shape not in PROFILE_SHAPES:
            raise ValueError(f"unknown profile shape {self.shape!r}")
        if not self.cutoff_k > 0:
            raise ValueError("cutoff_k must be positive")
        if self.target_l2_norm < 0:
            raise ValueError("target_l2_norm must be nonnegative")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


# ---------------------------------------------------------------------------
# transforms


def transform_forward(values: np.ndarray, grid: Grid) -> SpectralField:
    """Forward transform of a real lattice array to Fourier coefficients.

    Normalization: ``coeffs = rfftn(values) / n^3`` so the k = 0 coefficient
    is the mean of the field and Parseval holds in the grid convention.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.physical_shape:
        raise GridMismatchError(
            f"array shape {values.shape} does not match grid {grid.physical_shape}"
        )
    coeffs = backend.rfftn(values) / grid.n_points**3
    return SpectralField(grid, coeffs)


def transform_inverse(field: SpectralField) -> np.ndarray:
    """Inverse transform back to real lattice values.

    Raises :class:`SymmetryError` if the stored boundary planes break
    Hermitian symmetry beyond 1e-10 relative, which signals upstream
    corruption of the coefficients.
    """
    check_hermitian(field.coeffs, field.grid, tol=1e-10)
    return _inverse_arrays(field.coeffs, field.grid)


def _inverse_arrays(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    n = grid.n_points
    return backend.irfftn(coeffs, n) * float(n**3)


def _forward_arrays(values: np.ndarray, grid: Grid) -> np.ndarray:
    return backend.rfftn(values) / grid.n_points**3


def hermitian_defect(coeffs: np.ndarray, grid: Grid) -> float:
    """Max deviation from coeff(-k) == conj(coeff(k)), normalized by scale.

    Half-spectrum storage makes the interior structurally symmetric; only
    the z-index 0 and n/2 planes carry both members of a conjugate pair.
    """
    scale = np.max(np.abs(coeffs))
    if scale == 0.0:
        return 0.0
    ci = grid.conj_index
    worst = 0.0
    for iz in (0, grid.n_points // 2):
        plane = coeffs[..., iz]
        mirrored = np.conj(plane[np.ix_(ci, ci)])
        worst = max(worst, float(np.max(np.abs(plane - mirrored))))
    return worst / scale


def check_hermitian(coeffs: np.ndarray, grid: Grid, tol: float) -> None:
    defect = hermitian_defect(coeffs, grid)
    if defect > tol:
        raise SymmetryError(
            f"Hermitian symmetry broken: relative defect {defect:.3e} > {tol:g}"
        )


# ---------------------------------------------------------------------------
# calculus


def gradient(field: SpectralField, axis: int) -> SpectralField:
    """Spectral partial derivative along a 1-based axis (1..3)."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    g = field.grid
    if axis == 1:
        k = g.kx[:, None, None]
    elif axis == 2:
        k = g.kx[None, :, None]
    else:
        k = g.kz[None, None, :]
    return SpectralField(g, 1j * k * field.coeffs)


def dealias(field: SpectralField) -> SpectralField:
    """Zero every mode with any axis index beyond n/3 (two-thirds rule)."""
    return SpectralField(field.grid, field.coeffs * field.grid.dealias_maskf)


def leray_project(vector_field) -> tuple:
    """Project a 3-component spectral vector field onto divergence-free fields.

    Per mode k != 0 the output is u - k (k.u)/|k|^2; the k = 0 mode passes
    through unchanged.
    """
    f1, f2, f3 = vector_field
    g = f1.grid
    for other in (f2, f3):
        if not other.grid.same_as(g):
            raise GridMismatchError("vector components live on different grids")
    stack = np.stack([f1.coeffs, f2.coeffs, f3.coeffs])
    out = _leray_arrays(stack, g)
    return tuple(SpectralField(g, out[i]) for i in range(3))


def _leray_arrays(u: np.ndarray, grid: Grid) -> np.ndarray:
    kxg = grid.kx[:, None, None]
    kyg = grid.kx[None, :, None]
    kzg = grid.kz[None, None, :]
    div = (kxg * u[0] + kyg * u[1] + kzg * u[2]) * grid.inv_k2
    out = np.empty_like(u)
    out[0] = u[0] - kxg * div
    out[1] = u[1] - kyg * div
    out[2] = u[2] - kzg * div
    return out


def sobolev_seminorm_sq(field: SpectralField, order: float) -> float:
    """sum_k |k|^(2*order) |coeff(k)|^2 in the Parseval convention.

    Order 0 returns the squared L2 norm of the physical field.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    g = field.grid
    abs2 = field.coeffs.real**2 + field.coeffs.imag**2
    if order == 0:
        w = g.parseval_weights
    else:
        w = g.parseval_weights * g.k2**order
    return float(g.volume * np.sum(w * abs2))


def l2_norm_sq(field: SpectralField) -> float:
    return sobolev_seminorm_sq(field, 0)


def _stack_l2_sq(stack: np.ndarray, grid: Grid) -> float:
    """Parseval L2 norm squared summed over leading component axes."""
    abs2 = stack.real**2 + stack.imag**2
    return float(grid.volume * np.einsum("...xyz,xyz->", abs2, grid.parseval_weights))


# ---------------------------------------------------------------------------
# random divergence-free fields


def _envelope(profile: SpectrumProfile, grid: Grid) -> np.ndarray:
    kmag = grid.k_mag
    c = profile.cutoff_k
    if profile.shape == "flat_low_k_gaussian_cutoff":
        env = np.exp(-grid.k2 / (2.0 * c * c))
    elif profile.shape == "single_mode":
        shells = np.unique(np.round(kmag / grid.k_min))
        target = shells[np.argmin(np.abs(shells * grid.k_min - c))]
        env = (np.round(kmag / grid.k_min) == target).astype(np.float64)
    else:  # ring
        env = (np.abs(kmag - c) <= grid.k_min).astype(np.float64)
    env = env * grid.dealias_maskf
    env[0, 0, 0] = 0.0  # decay setting has no mean flow
    return env


def make_divfree_random_field(grid: Grid, profile: SpectrumProfile) -> np.ndarray:
    """Seeded divergence-free random vector field with a prescribed spectrum.

    Construction: three white-noise scalars are transformed, Leray-projected
    and dealiased; every retained mode is then rescaled so the transverse
    vector amplitude |u(k)| equals the profile envelope exactly (random
    direction and phase, deterministic modulus), and the whole field is
    scaled to the requested L2 norm.  The k = 0 mode is zero.

    Returns the coefficient stack with shape (3, n, n, n//2 + 1); pure
    function of (grid, profile).
    """
    rng = np.random.default_rng(profile.seed)
    white = rng.standard_normal((3,) + grid.physical_shape)
    coeffs = backend.rfftn(white) / grid.n_points**3
    coeffs = _leray_arrays(coeffs, grid)
    env = _envelope(profile, grid)
    vec_amp = np.sqrt(np.sum(coeffs.real**2 + coeffs.imag**2, axis=0))
    scale = np.where(vec_amp > 0.0, env / np.where(vec_amp > 0.0, vec_amp, 1.0), 0.0)
    coeffs = coeffs * scale
    norm_sq = _stack_l2_sq(coeffs, grid)
    if profile.target_l2_norm > 0.0:
        if norm_sq == 0.0:
            raise DegenerateProfileError(
                "profile produced an identically zero field but "
                f"target_l2_norm={profile.target_l2_norm} was requested"
            )
        coeffs *= profile.target_l2_norm / np.sqrt(norm_sq)
    else:
        coeffs[:] = 0.0
    return coeffs
