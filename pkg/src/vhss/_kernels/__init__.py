"""Kernel backend selection.

The numba kernels are used when numba imports cleanly, unless the
environment variable ``VHSS_NUMBA`` is set to ``0``/``false``/``off``, in
which case the pure-numpy path is used. Both backends are always importable
as ``vhss._kernels.numpy_impl`` and (if numba is present) ``vhss._kernels.jit``
so that benchmarks can compare them in one process.
"""
import importlib
import os

from . import numpy_impl

_flag = os.environ.get("VHSS_NUMBA", "1").strip().lower()

jit = None
if _flag not in ("0", "false", "off", "no"):
    try:
        jit = importlib.import_module(".jit", __name__)
    except ImportError:  # numba missing or broken
        jit = None

backend = jit if jit is not None else numpy_impl
BACKEND_NAME = "numba" if jit is not None else "numpy"

to_residues = backend.to_residues
ntt_forward = backend.ntt_forward
ntt_inverse = backend.ntt_inverse
pointwise_mac = backend.pointwise_mac
crt_accumulate = backend.crt_accumulate

__all__ = [
    "BACKEND_NAME",
    "crt_accumulate",
    "ntt_forward",
    "ntt_inverse",
    "numpy_impl",
    "pointwise_mac",
    "to_residues",
]
