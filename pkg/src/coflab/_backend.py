"""Pick the compiled kernels if they were built, else the pure-Python ones.

Set COFLAB_PURE_PYTHON=1 to force the fallback.
"""

import os

NAME = "python"
if os.environ.get("COFLAB_PURE_PYTHON", "") not in ("", "0"):
    from . import _pure as impl
else:
    try:
        from . import _accel as impl

        NAME = "cython"
    except ImportError:
        from . import _pure as impl

psi_series = impl.psi_series
start_index = impl.start_index
