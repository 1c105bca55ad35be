"""FFT backend selection.

Two interchangeable backends compute the real 3-D transforms:

* ``torch`` (CPU) - noticeably faster single-field transforms; used when
  importable.
* ``scipy.fft`` - always available fallback.

Selection: environment variable ``OLDROYDBOX_FFT`` set to ``torch``,
``scipy`` or ``auto`` (default).  Both backends are deterministic from run
to run; results agree to rounding.

Transforms are unnormalized (numpy semantics): ``irfftn(rfftn(f)) == f``.
Callers apply the 1/n^3 Fourier-series normalization themselves.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.fft as _sfft

_CHUNK = 12  # fields per batched transform call; larger batches thrash cache


def _resolve():
    choice = os.environ.get("OLDROYDBOX_FFT", "auto").lower()
    if choice not in ("auto", "torch", "scipy"):
        raise ValueError(f"OLDROYDBOX_FFT must be auto|torch|scipy, got {choice!r}")
    if choice in ("auto", "torch"):
        try:
            import torch  # noqa: F401

            return "torch"
        except ImportError:
            if choice == "torch":
                raise
    return "scipy"


FFT_BACKEND = _resolve()

if FFT_BACKEND == "torch":
    import torch as _torch


def rfftn(values: np.ndarray) -> np.ndarray:
    """Real-to-complex 3-D FFT over the last three axes.

    Accepts any number of leading batch axes.
    """
    shape = values.shape
    flat = values.reshape((-1,) + shape[-3:])
    if FFT_BACKEND == "torch":
        parts = [
            _torch.fft.rfftn(_torch.from_numpy(np.ascontiguousarray(flat[i : i + _CHUNK])), dim=(1, 2, 3)).numpy()
            for i in range(0, flat.shape[0], _CHUNK)
        ]
        out = np.concatenate(parts, axis=0) if len(parts) > 1 else parts[0]
    else:
        out = _sfft.rfftn(flat, axes=(1, 2, 3), workers=1)
    return out.reshape(shape[:-3] + out.shape[1:])


def irfftn(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Complex-to-real inverse 3-D FFT over the last three axes."""
    shape = coeffs.shape
    flat = coeffs.reshape((-1,) + shape[-3:])
    if FFT_BACKEND == "torch":
        parts = [
            _torch.fft.irfftn(_torch.from_numpy(np.ascontiguousarray(flat[i : i + _CHUNK])), s=(n, n, n), dim=(1, 2, 3)).numpy()
            for i in range(0, flat.shape[0], _CHUNK)
        ]
        out = np.concatenate(parts, axis=0) if len(parts) > 1 else parts[0]
    else:
        out = _sfft.irfftn(flat, s=(n, n, n), axes=(1, 2, 3), workers=1)
    return out.reshape(shape[:-3] + (n, n, n))
