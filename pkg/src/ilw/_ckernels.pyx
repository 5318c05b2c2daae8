# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``; masks are limited to 64 bits."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free, calloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

MAX_BITS = 64


cdef inline int popc(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline uint64_t bit(int i) nogil:
    return (<uint64_t>1) << i


cdef class _Ladder:
    cdef uint64_t* rows_high
    cdef uint64_t* cols_low
    cdef int n_rows, n_cols
    cdef int best
    cdef int* rows_seq
    cdef int* cols_seq
    cdef int* best_rows
    cdef int* best_cols
    cdef long long nodes, node_limit
    cdef dict memo
    cdef object cancel

    def __cinit__(self, rows_high, cols_low, int n_rows, int n_cols, cancel, long long node_limit):
        cdef int i
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows_high = <uint64_t*> malloc(max(n_cols, 1) * sizeof(uint64_t))
        self.cols_low = <uint64_t*> malloc(max(n_rows, 1) * sizeof(uint64_t))
        size = max(n_rows, n_cols) + 1
        self.rows_seq = <int*> malloc(size * sizeof(int))
        self.cols_seq = <int*> malloc(size * sizeof(int))
        self.best_rows = <int*> malloc(size * sizeof(int))
        self.best_cols = <int*> malloc(size * sizeof(int))
        for i in range(n_cols):
            self.rows_high[i] = <uint64_t> rows_high[i]
        for i in range(n_rows):
            self.cols_low[i] = <uint64_t> cols_low[i]
        self.memo = {}
        self.cancel = cancel
        self.nodes = 0
        self.node_limit = node_limit
        self.best = 0
        if n_rows and n_cols:
            self.best = 1
            self.best_rows[0] = 0
            self.best_cols[0] = 0

    def __dealloc__(self):
        free(self.rows_high)
        free(self.cols_low)
        free(self.rows_seq)
        free(self.cols_seq)
        free(self.best_rows)
        free(self.best_cols)

    cdef int dfs(self, uint64_t R, uint64_t C, int k) except -1:
        cdef int i, j, na, nb, a, b, t
        cdef uint64_t C2, R2, C3, m
        cdef int rows[64]
        cdef int cols[64]
        cdef int rkey[64]
        cdef int ckey[64]
        self.nodes += 1
        if self.cancel is not None and (self.nodes & 1023) == 0 and self.cancel.is_set():
            from ilw.cancel import Cancelled
            raise Cancelled("operation cancelled")
        if self.node_limit > 0 and self.nodes > self.node_limit:
            return 0
        if k > self.best:
            self.best = k
            for i in range(k):
                self.best_rows[i] = self.rows_seq[i]
                self.best_cols[i] = self.cols_seq[i]
        if k + min(popc(R), popc(C)) <= self.best:
            return 0
        key = (R, C)
        prev = self.memo.get(key)
        if prev is not None and <int>prev >= k:
            return 0
        self.memo[key] = k
        # order candidates by degeneracy, ties by index (insertion sort; n <= 64)
        na = 0
        m = R
        while m:
            a = __builtin_ctzll(m)
            m &= m - 1
            t = popc(self.cols_low[a] & C)
            i = na
            while i > 0 and rkey[i - 1] < t:
                rows[i] = rows[i - 1]
                rkey[i] = rkey[i - 1]
                i -= 1
            rows[i] = a
            rkey[i] = t
            na += 1
        nb = 0
        m = C
        while m:
            b = __builtin_ctzll(m)
            m &= m - 1
            t = popc(self.rows_high[b] & R)
            i = nb
            while i > 0 and ckey[i - 1] < t:
                cols[i] = cols[i - 1]
                ckey[i] = ckey[i - 1]
                i -= 1
            cols[i] = b
            ckey[i] = t
            nb += 1
        for i in range(na):
            a = rows[i]
            C2 = C & self.cols_low[a]
            for j in range(nb):
                b = cols[j]
                R2 = (R & self.rows_high[b]) & ~bit(a)
                C3 = C2 & ~bit(b)
                if k + 1 + min(popc(R2), popc(C3)) <= self.best:
                    continue
                self.rows_seq[k] = a
                self.cols_seq[k] = b
                self.dfs(R2, C3, k + 1)
        return 0


def ladder_search(rows_high, cols_low, int n_rows, int n_cols, cancel=None, long long node_limit=0):
    if n_rows > 64 or n_cols > 64:
        raise ValueError("compiled ladder kernel handles at most 64 rows and columns")
    cdef _Ladder st = _Ladder(rows_high, cols_low, n_rows, n_cols, cancel, node_limit)
    cdef uint64_t R, C
    if n_rows and n_cols:
        R = ~(<uint64_t>0) if n_rows == 64 else bit(n_rows) - 1
        C = ~(<uint64_t>0) if n_cols == 64 else bit(n_cols) - 1
        st.dfs(R, C, 0)
    return (st.best, [st.best_rows[i] for i in range(st.best)],
            [st.best_cols[i] for i in range(st.best)])


def is_shattered(lows, highs, w_mask, int k):
    cdef uint64_t w = <uint64_t> w_mask
    cdef uint64_t L, H, x, tr
    cdef Py_ssize_t f, n = len(lows)
    cdef long need = (<long>1) << k
    cdef long count = 0
    cdef long idx
    cdef int pos, bpos
    cdef unsigned char* seen
    if k > 26:
        raise ValueError("shattering kernel supports k <= 26")
    seen = <unsigned char*> calloc(need, 1)
    try:
        for f in range(n):
            L = <uint64_t> lows[f]
            H = <uint64_t> highs[f]
            if (w & ~(L | H)) != 0:
                continue
            tr = w & L
            # compress the trace to k bits along the positions of w
            idx = 0
            pos = 0
            x = w
            while x:
                bpos = __builtin_ctzll(x)
                x &= x - 1
                if (tr >> bpos) & 1:
                    idx |= (<long>1) << pos
                pos += 1
            if not seen[idx]:
                seen[idx] = 1
                count += 1
                if count == need:
                    return True
        return count == need
    finally:
        free(seen)


def ie_signed_boxes(lows, highs, cancel=None):
    cdef int m = len(lows)
    cdef long size = (<long>1) << m
    cdef uint64_t* il
    cdef uint64_t* ih
    cdef signed char* sg
    cdef uint64_t* lo
    cdef uint64_t* hi
    cdef long idx, prev, low
    cdef int b
    cdef uint64_t L, H
    cdef dict out = {}
    if m > 30:
        raise ValueError("inclusion-exclusion kernel supports at most 30 boxes")
    il = <uint64_t*> malloc(size * sizeof(uint64_t))
    ih = <uint64_t*> malloc(size * sizeof(uint64_t))
    sg = <signed char*> malloc(size)
    lo = <uint64_t*> malloc(max(m, 1) * sizeof(uint64_t))
    hi = <uint64_t*> malloc(max(m, 1) * sizeof(uint64_t))
    try:
        for b in range(m):
            lo[b] = <uint64_t> lows[b]
            hi[b] = <uint64_t> highs[b]
        il[0] = ~(<uint64_t>0)
        ih[0] = ~(<uint64_t>0)
        sg[0] = -1
        for idx in range(1, size):
            if cancel is not None and (idx & 4095) == 0 and cancel.is_set():
                from ilw.cancel import Cancelled
                raise Cancelled("operation cancelled")
            low = idx & -idx
            b = __builtin_ctzll(<unsigned long long> low)
            prev = idx ^ low
            L = il[prev] & lo[b]
            H = ih[prev] & hi[b]
            il[idx] = L
            ih[idx] = H
            sg[idx] = -sg[prev]
            if L and H:
                key = (L, H)
                out[key] = out.get(key, 0) + sg[idx]
        return {k: v for k, v in out.items() if v}
    finally:
        free(il)
        free(ih)
        free(sg)
        free(lo)
        free(hi)
