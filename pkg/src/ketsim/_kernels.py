"""Kernel dispatch: compiled core when built, numpy fallback otherwise.

Set ``KETSIM_KERNELS=py`` to force the fallback (used by the benchmark and by
tests that compare the two implementations).
"""
import os

if os.environ.get("KETSIM_KERNELS") == "py":
    from . import _kernels_py as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "numpy"

apply_single_qubit = _impl.apply_single_qubit
apply_multi_qubit = _impl.apply_multi_qubit
