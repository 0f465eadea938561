"""Tree-edit-distance kernels: compiled extension with a pure-Python fallback.

The compiled kernel is selected automatically when it built; set
PROOFSYNTH_PURE=1 to force the pure-Python fallback.
"""

from __future__ import annotations

import os


def load_kernel():
    """Return (tree_distance, backend_name) for the active kernel."""
    if not os.environ.get("PROOFSYNTH_PURE"):
        try:
            from . import ted_cy

            return ted_cy.tree_distance, ted_cy.BACKEND
        except ImportError:
            pass
    from . import ted_py

    return ted_py.tree_distance, ted_py.BACKEND
