"""Kernel backend selection: compiled extension if importable, numpy otherwise.

Set TSPLEX_PURE_PYTHON=1 to force the numpy fallback (used by the benchmark
and the parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("TSPLEX_PURE_PYTHON") == "1":
    _impl = _kernels_py
    USING_COMPILED_KERNELS = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        USING_COMPILED_KERNELS = True
    except ImportError:
        _impl = _kernels_py
        USING_COMPILED_KERNELS = False

gaussian_tc_from_cov = _impl.gaussian_tc_from_cov
l1ball_project_columns = _impl.l1ball_project_columns
COV_REGULARIZATION = _impl.COV_REGULARIZATION
