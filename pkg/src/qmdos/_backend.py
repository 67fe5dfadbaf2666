"""Select the compiled kernels when importable, else the pure-Python ones.

Set ``QMDOS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("QMDOS_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

alt_binom_terms = kernels.alt_binom_terms
piece_table = kernels.piece_table
piece_integral_sum = kernels.piece_integral_sum
energy_samples = kernels.energy_samples
