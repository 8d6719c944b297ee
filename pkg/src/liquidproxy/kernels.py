"""Backend selection for the hot enumeration/sampling kernels.

The compiled extension is used when it imports; set ``LIQUIDPROXY_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _pykernels as python

compiled = None
if not os.environ.get("LIQUIDPROXY_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

count_fixpoint_free_rows = impl.count_fixpoint_free_rows
count_all_hung_rows = impl.count_all_hung_rows
count_fixpoint_free_proxy = impl.count_fixpoint_free_proxy
count_all_hung_default = impl.count_all_hung_default
