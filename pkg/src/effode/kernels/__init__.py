"""Dense float64 kernels: compiled core with a pure-numpy fallback.

The compiled extension (built from ``_core.pyx``) is used when importable;
otherwise ``pyref`` serves every call. The choice is made once, at import.
Set ``EFFODE_KERNELS=pure`` to force the fallback or ``EFFODE_KERNELS=compiled``
to fail loudly when the extension is missing.
"""

import os

from . import pyref

_choice = os.environ.get("EFFODE_KERNELS", "auto").lower()
if _choice not in ("auto", "compiled", "pure"):
    raise ValueError(f"EFFODE_KERNELS must be auto, compiled, or pure; got {_choice!r}")

_impl = None
if _choice in ("auto", "compiled"):
    try:
        from . import _core as _impl
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "EFFODE_KERNELS=compiled but the effode.kernels._core extension "
                "is not built; reinstall the package or use EFFODE_KERNELS=pure"
            ) from None
if _impl is None:
    _impl = pyref

BACKEND = "pure" if _impl is pyref else "compiled"


def active_backend():
    """Name of the kernel backend selected at import: 'compiled' or 'pure'."""
    return BACKEND


matmul = _impl.matmul
matmul_nt = _impl.matmul_nt
matmul_tn = _impl.matmul_tn
hadamard = _impl.hadamard
add = _impl.add
scale = _impl.scale
transpose = _impl.transpose
affine_combine = _impl.affine_combine
relu = _impl.relu
relu_vjp = _impl.relu_vjp
log_softmax = _impl.log_softmax
log_softmax_vjp = _impl.log_softmax_vjp
row_mean = _impl.row_mean
row_mean_vjp = _impl.row_mean_vjp
total_sum = _impl.total_sum
full = _impl.full
