"""Backend selection for the hot loops.

The compiled extension is preferred; set ``MEROCLASS_PURE_PYTHON=1`` to force
the numpy fallback (used by the benchmark and the backend-parity tests).
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("MEROCLASS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py

# np.convolve (a BLAS dot per output) beats a compiled double loop, so the
# product always uses numpy
series_mul = _kernels_py.series_mul
series_reciprocal = _impl.series_reciprocal
horner = _impl.horner
winding_numbers = _impl.winding_numbers
find_collision = _impl.find_collision
