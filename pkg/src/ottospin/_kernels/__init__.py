"""Backend selection for the slice-product hot kernel.

The compiled Cython extension is preferred when it imported cleanly; the
vectorized numpy fallback is always available.  Setting the environment
variable ``OTTOSPIN_PURE_PYTHON=1`` before import forces the fallback, which
is how the two backends get benchmarked and cross-checked.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND: str

if os.environ.get("OTTOSPIN_PURE_PYTHON") == "1":
    slice_product = _fallback.slice_product
    BACKEND = "python"
else:
    try:
        from . import _core  # type: ignore[attr-defined]

        slice_product = _core.slice_product
        BACKEND = "cython"
    except ImportError:
        slice_product = _fallback.slice_product
        BACKEND = "python"

__all__ = ["BACKEND", "slice_product"]
