"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``ILW_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python

compiled = None
if not os.environ.get("ILW_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

BACKEND = "compiled" if compiled is not None else "python"
COMPILED_MAX_BITS = 64


def _fits(*masks) -> bool:
    return all(0 <= m < (1 << COMPILED_MAX_BITS) for m in masks)


def ladder_search(rows_high, cols_low, n_rows, n_cols, cancel=None, node_limit=0):
    if compiled is not None and n_rows <= 64 and n_cols <= 64:
        return compiled.ladder_search(list(rows_high), list(cols_low), n_rows, n_cols,
                                      cancel, node_limit)
    return python.ladder_search(rows_high, cols_low, n_rows, n_cols, cancel, node_limit)


def is_shattered(lows, highs, w_mask, k):
    if compiled is not None and k <= 26 and _fits(w_mask):
        return compiled.is_shattered(lows, highs, w_mask, k)
    return python.is_shattered(lows, highs, w_mask, k)


def ie_signed_boxes(lows, highs, cancel=None):
    if compiled is not None and len(lows) <= 30 and _fits(*lows, *highs):
        return compiled.ie_signed_boxes(list(lows), list(highs), cancel)
    return python.ie_signed_boxes(lows, highs, cancel)
