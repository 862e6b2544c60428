# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled query kernels.

Mirrors ``_pycore`` class for class. Every method is unchecked: positions
are 1-based, rank takes a prefix length, and callers in the public layer
validate ranges before dispatching here.
"""

from libc.stdint cimport int16_t, int32_t, int64_t, uint8_t, uint64_t

import numpy as np

NAME = "compiled"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    BLOCK_SHIFT = 3  # 8 words (512 bits) per rank block


cdef inline int64_t _word_select(uint64_t w, int64_t r) noexcept nogil:
    # 0-based offset of the r-th set bit of w (r >= 1)
    cdef int64_t k
    for k in range(r - 1):
        w &= w - 1
    return __builtin_ctzll(w)


cdef class Bits:
    cdef readonly int64_t n
    cdef readonly int64_t ones

    cdef int c_access(self, int64_t i):
        return 0

    cdef int64_t c_rank1(self, int64_t i):
        return 0

    cdef int64_t c_select1(self, int64_t j):
        return 0

    cdef int64_t c_select0(self, int64_t j):
        return 0

    def access(self, int64_t i):
        return self.c_access(i)

    def rank1(self, int64_t i):
        return self.c_rank1(i)

    def rank0(self, int64_t i):
        return i - self.c_rank1(i)

    def select1(self, int64_t j):
        return self.c_select1(j)

    def select0(self, int64_t j):
        return self.c_select0(j)


cdef class DenseBits(Bits):
    cdef const uint64_t[::1] words
    cdef const int64_t[::1] blocks
    cdef int64_t nblocks

    def __init__(self, int64_t n, int64_t ones, words, blocks):
        self.n = n
        self.ones = ones
        self.words = words
        self.blocks = blocks
        self.nblocks = blocks.shape[0]

    cdef int c_access(self, int64_t i):
        i -= 1
        return <int>((self.words[i >> 6] >> (i & 63)) & 1)

    cdef int64_t c_rank1(self, int64_t i):
        cdef int64_t w = i >> 6
        cdef int64_t b = w >> BLOCK_SHIFT
        cdef int64_t r = self.blocks[b]
        cdef int64_t k
        cdef uint64_t one = 1
        for k in range(b << BLOCK_SHIFT, w):
            r += __builtin_popcountll(self.words[k])
        if i & 63:
            r += __builtin_popcountll(self.words[w] & ((one << (i & 63)) - 1))
        return r

    cdef int64_t c_select1(self, int64_t j):
        cdef int64_t lo = 0, hi = self.nblocks - 1, mid, k, c
        # largest block whose preceding ones < j
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self.blocks[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        j -= self.blocks[lo]
        k = lo << BLOCK_SHIFT
        while True:
            c = __builtin_popcountll(self.words[k])
            if j <= c:
                return (k << 6) + _word_select(self.words[k], j) + 1
            j -= c
            k += 1

    cdef int64_t c_select0(self, int64_t j):
        cdef int64_t lo = 0, hi = self.nblocks - 1, mid, k, c
        cdef uint64_t w
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if (mid << (BLOCK_SHIFT + 6)) - self.blocks[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        j -= (lo << (BLOCK_SHIFT + 6)) - self.blocks[lo]
        k = lo << BLOCK_SHIFT
        while True:
            w = ~self.words[k]
            c = __builtin_popcountll(w)
            if j <= c:
                return (k << 6) + _word_select(w, j) + 1
            j -= c
            k += 1


cdef class SparseBits(Bits):
    cdef const int64_t[::1] pos
    cdef int stored
    cdef int64_t m

    def __init__(self, int64_t n, int stored, pos):
        self.n = n
        self.stored = stored
        self.pos = pos
        self.m = pos.shape[0]
        self.ones = self.m if stored else n - self.m

    cdef inline int64_t _count(self, int64_t i):
        # stored bits at positions <= i
        cdef int64_t lo = 0, hi = self.m, mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.pos[mid] <= i:
                lo = mid + 1
            else:
                hi = mid
        return lo

    cdef inline int64_t _select_other(self, int64_t j):
        # j-th position not in pos: j plus the stored bits preceding it
        cdef int64_t lo = 0, hi = self.m, mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.pos[mid] - mid <= j:
                lo = mid + 1
            else:
                hi = mid
        return j + lo

    cdef int c_access(self, int64_t i):
        cdef int64_t k = self._count(i)
        if k > 0 and self.pos[k - 1] == i:
            return self.stored
        return 1 - self.stored

    cdef int64_t c_rank1(self, int64_t i):
        if self.stored:
            return self._count(i)
        return i - self._count(i)

    cdef int64_t c_select1(self, int64_t j):
        if self.stored:
            return self.pos[j - 1]
        return self._select_other(j)

    cdef int64_t c_select0(self, int64_t j):
        if self.stored:
            return self._select_other(j)
        return self.pos[j - 1]


cdef inline int64_t _rank0(Bits b, int64_t i):
    return i - b.c_rank1(i)


cdef class Seq:
    cdef readonly int64_t n
    cdef int64_t counts[256]

    cdef int c_access(self, int64_t i):
        return 0

    cdef int64_t c_rank(self, int x, int64_t i):
        return 0

    cdef int64_t c_select(self, int x, int64_t j):
        return 0

    def count(self, int x):
        return self.counts[x]

    def access(self, int64_t i):
        return self.c_access(i)

    def rank(self, int x, int64_t i):
        return self.c_rank(x, i)

    def select(self, int x, int64_t j):
        return self.c_select(x, j)

    def access_many(self, const int64_t[::1] idx):
        cdef Py_ssize_t k, m = idx.shape[0]
        out = np.empty(m, dtype=np.uint8)
        cdef uint8_t[::1] o = out
        for k in range(m):
            o[k] = <uint8_t>self.c_access(idx[k])
        return out

    def rank_many(self, const uint8_t[::1] syms, const int64_t[::1] idx):
        cdef Py_ssize_t k, m = idx.shape[0]
        out = np.empty(m, dtype=np.int64)
        cdef int64_t[::1] o = out
        for k in range(m):
            o[k] = self.c_rank(syms[k], idx[k])
        return out

    def select_many(self, const uint8_t[::1] syms, const int64_t[::1] js):
        cdef Py_ssize_t k, m = js.shape[0]
        out = np.empty(m, dtype=np.int64)
        cdef int64_t[::1] o = out
        for k in range(m):
            o[k] = self.c_select(syms[k], js[k])
        return out


cdef class Wavelet(Seq):
    """Balanced wavelet tree; node children < 0 encode leaves as -(code+1)."""
    cdef list nodes
    cdef const int32_t[::1] left
    cdef const int32_t[::1] right
    cdef const int32_t[::1] mid
    cdef const int16_t[::1] code_of
    cdef const uint8_t[::1] sym_of
    cdef const int32_t[::1] path_node
    cdef const uint8_t[::1] path_bit
    cdef const int32_t[::1] path_len
    cdef int sigma, maxd

    def __init__(self, int64_t n, counts, nodes, left, right, mid, code_of,
                 sym_of, path_node, path_bit, path_len, int maxd):
        cdef int x
        self.n = n
        for x in range(256):
            self.counts[x] = counts[x]
        self.nodes = list(nodes)
        self.left = left
        self.right = right
        self.mid = mid
        self.code_of = code_of
        self.sym_of = sym_of
        self.sigma = sym_of.shape[0]
        self.path_node = path_node
        self.path_bit = path_bit
        self.path_len = path_len
        self.maxd = maxd

    cdef int c_access(self, int64_t i):
        cdef int v = 0, ch
        cdef Bits bv
        if self.sigma == 1:
            return self.sym_of[0]
        while True:
            bv = <Bits>self.nodes[v]
            if bv.c_access(i):
                i = bv.c_rank1(i)
                ch = self.right[v]
            else:
                i = i - bv.c_rank1(i)
                ch = self.left[v]
            if ch < 0:
                return self.sym_of[-ch - 1]
            v = ch

    cdef int64_t c_rank(self, int x, int64_t i):
        cdef int c = self.code_of[x], v = 0, ch
        cdef Bits bv
        if c < 0:
            return 0
        if self.sigma == 1:
            return i
        while True:
            bv = <Bits>self.nodes[v]
            if c >= self.mid[v]:
                i = bv.c_rank1(i)
                ch = self.right[v]
            else:
                i = i - bv.c_rank1(i)
                ch = self.left[v]
            if ch < 0 or i == 0:
                return i
            v = ch

    cdef int64_t c_select(self, int x, int64_t j):
        cdef int c = self.code_of[x], d
        cdef int64_t base
        cdef Bits bv
        if self.sigma == 1:
            return j
        base = c * self.maxd
        for d in range(self.path_len[c] - 1, -1, -1):
            bv = <Bits>self.nodes[self.path_node[base + d]]
            if self.path_bit[base + d]:
                j = bv.c_select1(j)
            else:
                j = bv.c_select0(j)
        return j


cdef class RelSeq(Seq):
    """A string answered through a reference sequence plus difference markers."""
    cdef Seq s1
    cdef Seq dseq
    cdef Bits b
    cdef Bits bp
    cdef list bx
    cdef list bpx

    def __init__(self, int64_t n, counts, Seq s1, Bits b, list bx, Bits bp,
                 bpx, Seq dseq):
        cdef int x
        self.n = n
        for x in range(256):
            self.counts[x] = counts[x]
        self.s1 = s1
        self.b = b
        self.bx = bx
        self.bp = bp
        self.bpx = bpx
        self.dseq = dseq

    cdef int c_access(self, int64_t i):
        if self.bp.c_access(i):
            return self.dseq.c_access(self.bp.c_rank1(i))
        return self.s1.c_access(self.b.c_select0(i - self.bp.c_rank1(i)))

    cdef int64_t c_rank(self, int x, int64_t i):
        cdef int64_t ones = self.bp.c_rank1(i)
        cdef int64_t j = i - ones, r = 0, k
        cdef object vx = self.bx[x]
        cdef Bits bv
        if j > 0 and vx is not None:
            bv = <Bits>vx
            k = self.s1.c_rank(x, self.b.c_select0(j))
            r = k - bv.c_rank1(k)
        if ones > 0:
            r += self.dseq.c_rank(x, ones)
        return r

    cdef int64_t c_sub_select(self, int x, int64_t i):
        cdef Bits bv = <Bits>self.bx[x]
        return _rank0(self.b, self.s1.c_select(x, bv.c_select0(i)))

    cdef int64_t c_select(self, int x, int64_t i):
        cdef Bits v = <Bits>self.bpx[x]
        if v.c_access(i):
            return self.bp.c_select1(self.dseq.c_select(x, v.c_rank1(i)))
        return self.bp.c_select0(self.c_sub_select(x, i - v.c_rank1(i)))

    def sub_select(self, int x, int64_t i):
        return self.c_sub_select(x, i)


cdef class FMCore:
    """LF and Psi over any Seq, given the C array."""
    cdef Seq seq
    cdef readonly int64_t n
    cdef int64_t carr[257]
    cdef int nsyms
    cdef int syms[256]
    cdef int64_t starts[256]

    def __init__(self, Seq seq, carr, syms):
        cdef int k
        self.seq = seq
        self.n = seq.n
        for k in range(257):
            self.carr[k] = carr[k]
        self.nsyms = len(syms)
        for k in range(self.nsyms):
            self.syms[k] = syms[k]
            self.starts[k] = carr[syms[k]]

    cdef inline int _row_sym(self, int64_t i):
        cdef int lo = 0, hi = self.nsyms - 1, mid
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self.starts[mid] < i:
                lo = mid
            else:
                hi = mid - 1
        return self.syms[lo]

    cdef int64_t c_lf(self, int64_t i):
        cdef int c = self.seq.c_access(i)
        return self.carr[c] + self.seq.c_rank(c, i)

    cdef int64_t c_psi(self, int64_t i):
        cdef int c = self._row_sym(i)
        return self.seq.c_select(c, i - self.carr[c])

    cdef int64_t c_psi_binary(self, int64_t i):
        cdef int c = self._row_sym(i)
        cdef int64_t j = i - self.carr[c]
        cdef int64_t lo = j, hi = self.n, mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.seq.c_rank(c, mid) >= j:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def lf(self, int64_t i):
        return self.c_lf(i)

    def psi(self, int64_t i):
        return self.c_psi(i)

    def psi_binary(self, int64_t i):
        return self.c_psi_binary(i)

    def lf_many(self, const int64_t[::1] idx):
        cdef Py_ssize_t k, m = idx.shape[0]
        out = np.empty(m, dtype=np.int64)
        cdef int64_t[::1] o = out
        for k in range(m):
            o[k] = self.c_lf(idx[k])
        return out

    def psi_many(self, const int64_t[::1] idx):
        cdef Py_ssize_t k, m = idx.shape[0]
        out = np.empty(m, dtype=np.int64)
        cdef int64_t[::1] o = out
        for k in range(m):
            o[k] = self.c_psi(idx[k])
        return out

    def psi_binary_many(self, const int64_t[::1] idx):
        cdef Py_ssize_t k, m = idx.shape[0]
        out = np.empty(m, dtype=np.int64)
        cdef int64_t[::1] o = out
        for k in range(m):
            o[k] = self.c_psi_binary(idx[k])
        return out


def lis_mask(const int64_t[::1] values):
    """Boolean mask selecting one longest strictly increasing subsequence.

    Ties resolve toward the earliest-ending chain, so the result is
    deterministic for a given input.
    """
    cdef Py_ssize_t m = values.shape[0], k, lo, hi, mid, length = 0
    tails_np = np.empty(m + 1, dtype=np.int64)
    prev_np = np.empty(m, dtype=np.int64)
    mask = np.zeros(m, dtype=bool)
    cdef int64_t[::1] tails = tails_np
    cdef int64_t[::1] prev = prev_np
    cdef uint8_t[::1] mk = mask.view(np.uint8)
    cdef int64_t v
    for k in range(m):
        v = values[k]
        lo = 0
        hi = length
        while lo < hi:
            mid = (lo + hi) >> 1
            if values[tails[mid]] < v:
                lo = mid + 1
            else:
                hi = mid
        prev[k] = tails[lo - 1] if lo > 0 else -1
        tails[lo] = k
        if lo == length:
            length += 1
    if length:
        k = tails[length - 1]
        while k >= 0:
            mk[k] = 1
            k = prev[k]
    return mask
