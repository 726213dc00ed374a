"""State-vector kernel backend selection.

The compiled Cython extension is preferred when it was built; the numpy
reference implementation is the fallback. Setting the environment variable
``WFSIM_PURE=1`` forces the reference backend (useful for benchmarking and
for debugging suspected kernel issues). Both backends implement identical
contracts and are cross-checked in the test suite.
"""

from __future__ import annotations

import os

from . import reference

if os.environ.get("WFSIM_PURE"):
    _impl = reference
else:
    try:
        from . import _statevec as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = reference

BACKEND = _impl.BACKEND_NAME
apply_matrix = _impl.apply_matrix
z_weights = _impl.z_weights
project_z = _impl.project_z

__all__ = ["BACKEND", "apply_matrix", "z_weights", "project_z", "reference"]
