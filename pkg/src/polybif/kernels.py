"""Kernel backend selection.

The compiled extension is used when it imports; set ``POLYBIF_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

BACKEND = "python"

if os.environ.get("POLYBIF_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import iterate_block, orbit_jet
else:
    try:
        from ._kernels_c import iterate_block, orbit_jet

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import iterate_block, orbit_jet

__all__ = ["BACKEND", "iterate_block", "orbit_jet"]
