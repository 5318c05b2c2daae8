"""Pure-Python versions of the hot search kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``;
``ilw.kernels`` picks the compiled one when it is importable.  Sets are
bitmasks held in Python ints.
"""

from __future__ import annotations


def popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def ladder_search(rows_high, cols_low, n_rows, n_cols, cancel=None, node_limit=0):
    """Longest ladder by depth-first search over candidate row/column sets.

    ``rows_high[b]`` is the mask of rows whose entry at column ``b`` is
    ``>= r``; ``cols_low[a]`` is the mask of columns where row ``a`` is
    ``<= s``.  Returns ``(k, rows, cols)`` with the witness sequences.
    ``node_limit > 0`` stops early and returns the best found so far.
    """
    best = [1, [0], [0]] if n_rows and n_cols else [0, [], []]
    memo: dict = {}
    rows_seq: list[int] = []
    cols_seq: list[int] = []
    nodes = [0]

    def dfs(R, C):
        nodes[0] += 1
        if cancel is not None and nodes[0] % 1024 == 0 and cancel.is_set():
            from .cancel import Cancelled
            raise Cancelled("operation cancelled")
        if node_limit and nodes[0] > node_limit:
            return
        k = len(rows_seq)
        if k > best[0]:
            best[0], best[1], best[2] = k, list(rows_seq), list(cols_seq)
        if k + min(popcount(R), popcount(C)) <= best[0]:
            return
        key = (R, C)
        if memo.get(key, -1) >= k:
            return
        memo[key] = k
        rows = sorted(_bits(R), key=lambda a: (-popcount(cols_low[a] & C), a))
        cols = sorted(_bits(C), key=lambda b: (-popcount(rows_high[b] & R), b))
        for a in rows:
            C2 = C & cols_low[a]
            for b in cols:
                R2 = (R & rows_high[b]) & ~(1 << a)
                C3 = C2 & ~(1 << b)
                if k + 1 + min(popcount(R2), popcount(C3)) <= best[0]:
                    continue
                rows_seq.append(a)
                cols_seq.append(b)
                dfs(R2, C3)
                rows_seq.pop()
                cols_seq.pop()

    if n_rows and n_cols:
        dfs((1 << n_rows) - 1, (1 << n_cols) - 1)
    return best[0], best[1], best[2]


def is_shattered(lows, highs, w_mask: int, k: int) -> bool:
    """True iff every subset of ``w_mask`` is cut out as ``w & L_f`` by some ``f``
    whose low and high sets together cover ``w``."""
    traces = set()
    need = 1 << k
    for L, H in zip(lows, highs):
        if w_mask & ~(L | H) == 0:
            traces.add(w_mask & L)
            if len(traces) == need:
                return True
    return len(traces) == need


def ie_signed_boxes(lows, highs, cancel=None):
    """Signed multiplicities of the intersection boxes in inclusion-exclusion.

    Returns a dict ``{(L, H): c}`` such that the measure of the union of the
    boxes ``L_i x H_i`` (raised to any power k) is
    ``sum c * (mu(L) mu(H))^k``.
    """
    m = len(lows)
    size = 1 << m
    inter_l = [0] * size
    inter_h = [0] * size
    sign = [0] * size
    full = -1
    inter_l[0] = full
    inter_h[0] = full
    sign[0] = -1
    out: dict = {}
    for idx in range(1, size):
        if cancel is not None and idx % 4096 == 0 and cancel.is_set():
            from .cancel import Cancelled
            raise Cancelled("operation cancelled")
        low = idx & -idx
        bit = low.bit_length() - 1
        prev = idx ^ low
        L = inter_l[prev] & lows[bit]
        H = inter_h[prev] & highs[bit]
        inter_l[idx] = L
        inter_h[idx] = H
        sign[idx] = -sign[prev]
        if L and H:
            key = (L, H)
            out[key] = out.get(key, 0) + sign[idx]
    return {k: v for k, v in out.items() if v}
