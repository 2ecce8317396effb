"""Kernel backend selection.

Imports the compiled extension when present, otherwise the pure-Python
fallback. Set QDS_PURE_PYTHON=1 before import to force the fallback (used
by the benchmark and the backend-equivalence tests). BACKEND names the
active implementation: "compiled" or "python".
"""

from __future__ import annotations

import os

_force_pure = os.environ.get("QDS_PURE_PYTHON", "").strip() not in ("", "0")

if not _force_pure:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"
else:
    from . import _kernels_py as _impl

    BACKEND = "python"

jacobi_eigh = _impl.jacobi_eigh
expm_pade = _impl.expm_pade
