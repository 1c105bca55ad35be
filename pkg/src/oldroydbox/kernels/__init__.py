"""Hot-kernel backend dispatch.

``OLDROYDBOX_KERNELS`` selects the implementation of the pointwise inner
loops:

* ``numba`` - compiled loops (the default when numba imports);
* ``numpy`` - vectorized fallback, always available;
* ``auto``  - numba if importable, else numpy.

Both implementations share signatures and array layouts; the test suite
runs them against each other, and ``benchmarks/kernel_bench.py`` compares
their speed.
"""

from __future__ import annotations

import os

from . import numpy_impl


def _resolve():
    choice = os.environ.get("OLDROYDBOX_KERNELS", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"OLDROYDBOX_KERNELS must be auto|numba|numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy", numpy_impl
    try:
        from . import numba_impl

        return "numba", numba_impl
    except ImportError:
        if choice == "numba":
            raise
        return "numpy", numpy_impl


KERNEL_BACKEND, impl = _resolve()

build_gradient_stacks = impl.build_gradient_stacks
nonlinear_products = impl.nonlinear_products
project_and_mask = impl.project_and_mask
combine_af = impl.combine_af
combine_sf = impl.combine_sf
axpb_af = impl.axpb_af
axpb_sf = impl.axpb_sf
axpb2_af = impl.axpb2_af
final_af = impl.final_af
final_sf = impl.final_sf
