"""Cubic periodic-box discretization and its wavenumber lattice.

Spectral fields are stored in the half-spectrum layout produced by a real
3-D FFT: shape ``(n, n, n//2 + 1)``, axis order (x, y, z), with the
redundant conjugate modes of the z axis dropped.  The wavenumber lattice is
``k = k_min * z`` for integer triples ``z`` with each component in
``[-n/2, n/2)``.

Fourier convention (fixed once, used everywhere): ``coeff(k)`` is the
Fourier-series coefficient, i.e. ``coeff = rfftn(values) / n**3``, so that
Parseval reads

    integral |f|^2 dx  =  V * sum_k |coeff(k)|^2

with ``V = box_length**3`` and the sum running over the full lattice
(half-spectrum entries carry weight 2 where they stand for a conjugate
pair).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Cubic lattice of ``n_points**3`` collocation points on a periodic box."""

    n_points: int
    box_length: float

    def __post_init__(self):
        n = self.n_points
        if n < 8 or n % 2 != 0:
            raise ValueError(f"n_points must be even and >= 8, got {n}")
        if not self.box_length > 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")

    # -- scalars ---------------------------------------------------------

    @property
    def k_min(self) -> float:
        return 2.0 * np.pi / self.box_length

    @cached_property
    def k_max_retained(self) -> float:
        """Largest |k| surviving the two-thirds dealiasing rule."""
        m = int(np.floor(self.n_points / 3))
        return self.k_min * m * np.sqrt(3.0)

    @property
    def volume(self) -> float:
        return self.box_length**3

    @property
    def dx(self) -> float:
        return self.box_length / self.n_points

    @property
    def spectral_shape(self):
        n = self.n_points
        return (n, n, n // 2 + 1)

    @property
    def physical_shape(self):
        n = self.n_points
        return (n, n, n)

    # -- lattice arrays ---------------------------------------------------

    @cached_property
    def index_x(self) -> np.ndarray:
        """Integer mode indices along a full axis, fftfreq order."""
        n = self.n_points
        return np.fft.fftfreq(n, 1.0 / n)

    @cached_property
    def index_z(self) -> np.ndarray:
        """Integer mode indices along the half (last) axis: 0 .. n/2."""
        return np.arange(self.n_points // 2 + 1, dtype=float)

    @cached_property
    def kx(self) -> np.ndarray:
        return self.k_min * self.index_x

    @cached_property
    def kz(self) -> np.ndarray:
        return self.k_min * self.index_z

    @cached_property
    def k2(self) -> np.ndarray:
        """|k|^2 on the half-spectrum lattice."""
        kx = self.kx
        return (
            kx[:, None, None] ** 2 + kx[None, :, None] ** 2 + self.kz[None, None, :] ** 2
        )

    @cached_property
    def k_mag(self) -> np.ndarray:
        return np.sqrt(self.k2)

    @cached_property
    def inv_k2(self) -> np.ndarray:
        """1/|k|^2 with the k = 0 entry set to zero."""
        k2 = self.k2.copy()
        k2[0, 0, 0] = 1.0
        out = 1.0 / k2
        out[0, 0, 0] = 0.0
        return out

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Boolean mask of modes kept by the two-thirds rule.

        A mode is dropped as soon as any axis index exceeds n/3; the kept
        set is exactly closed under quadratic products on the n-grid
        (aliased images of products of kept modes land outside the mask).
        """
        n = self.n_points
        lim = n / 3.0
        ax = np.abs(self.index_x)
        az = np.abs(self.index_z)
        return (
            (ax[:, None, None] <= lim)
            & (ax[None, :, None] <= lim)
            & (az[None, None, :] <= lim)
        )

    @cached_property
    def dealias_maskf(self) -> np.ndarray:
        return self.dealias_mask.astype(np.float64)

    @cached_property
    def parseval_weights(self) -> np.ndarray:
        """Multiplicity of each stored mode in the full-lattice Parseval sum.

        Half-spectrum entries with 0 < z-index < n/2 represent a conjugate
        pair and count twice; the z = 0 and z = n/2 planes count once.
        """
        n = self.n_points
        wz = np.full(n // 2 + 1, 2.0)
        wz[0] = 1.0
        wz[-1] = 1.0
        return np.broadcast_to(wz[None, None, :], self.spectral_shape).copy()

    @cached_property
    def conj_index(self) -> np.ndarray:
        """Index map ix -> (-ix) mod n used for Hermitian-symmetry checks."""
        n = self.n_points
        return (-np.arange(n)) % n

    # -- helpers ----------------------------------------------------------

    def weighted_mode_sum(self, abs2, order=0) -> float:
        """V * sum_k w |k|^(2*order) abs2(k); the Parseval-convention sum."""
        if order == 0:
            w = self.parseval_weights
        else:
            w = self.parseval_weights * self.k2**order
        return float(self.volume * np.einsum("...xyz,xyz->", abs2, w))

    def same_as(self, other: "Grid") -> bool:
        return (
            self.n_points == other.n_points and self.box_length == other.box_length
        )
