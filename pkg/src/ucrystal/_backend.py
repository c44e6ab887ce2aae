"""Select the compiled kernels when available, else the numpy fallback.

Set UCRYSTAL_PURE=1 to force the fallback.
"""
import os

if os.environ.get("UCRYSTAL_PURE"):
    from . import _pycore as core
    BACKEND = "python"
else:
    try:
        from . import _fastcore as core
        BACKEND = "cython"
    except ImportError:
        from . import _pycore as core
        BACKEND = "python"

fp_rref = core.fp_rref
zn_snf_valuations = core.zn_snf_valuations
dfs_count = core.dfs_count
