"""Select the Gaussian integrator kernels at import time.

The compiled Cython module is preferred when importable; otherwise the
numpy fallback is used.  ``QEL_BACKEND=python`` forces the fallback,
``QEL_BACKEND=compiled`` demands the extension and fails loudly if it is
missing.  Both kernels implement identical update rules; they agree to
floating-point rounding, not bitwise, so any single build is fully
deterministic but cross-backend comparisons need a tolerance.
"""

from __future__ import annotations

import os

from . import _riccati_py

_requested = os.environ.get("QEL_BACKEND", "").strip().lower()

try:
    from . import _riccati_cy
except ImportError:
    _riccati_cy = None

if _requested == "python":
    _impl = _riccati_py
    BACKEND = "python"
elif _requested in ("compiled", "cython"):
    if _riccati_cy is None:
        raise ImportError(
            "QEL_BACKEND=compiled but the qel._riccati_cy extension is not built; "
            "reinstall the package or unset QEL_BACKEND"
        )
    _impl = _riccati_cy
    BACKEND = "compiled"
elif _requested in ("", "auto"):
    _impl = _riccati_cy if _riccati_cy is not None else _riccati_py
    BACKEND = "compiled" if _riccati_cy is not None else "python"
else:
    raise ImportError(f"unknown QEL_BACKEND value {_requested!r}; use 'python' or 'compiled'")

riccati_rk4_path = _impl.riccati_rk4_path
mean_em_paths = _impl.mean_em_paths
