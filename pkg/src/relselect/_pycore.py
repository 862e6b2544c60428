"""Pure-Python query kernels, used when the compiled core is unavailable.

Same classes, constructor signatures and (unchecked, 1-based) semantics as
``_ccore``. Arrays are converted to lists once at construction because
list indexing on Python ints is much faster than numpy scalar access.
"""

from bisect import bisect_left, bisect_right

import numpy as np

NAME = "python"

BLOCK_SHIFT = 3


def _word_select(w, r):
    for _ in range(r - 1):
        w &= w - 1
    return (w & -w).bit_length() - 1


class Bits:
    n = 0
    ones = 0

    def rank0(self, i):
        return i - self.rank1(i)


class DenseBits(Bits):
    def __init__(self, n, ones, words, blocks):
        self.n = int(n)
        self.ones = int(ones)
        self.words = [int(w) for w in words]
        self.blocks = [int(b) for b in blocks]

    def access(self, i):
        i -= 1
        return (self.words[i >> 6] >> (i & 63)) & 1

    def rank1(self, i):
        w = i >> 6
        b = w >> BLOCK_SHIFT
        words = self.words
        r = self.blocks[b]
        for k in range(b << BLOCK_SHIFT, w):
            r += words[k].bit_count()
        if i & 63:
            r += (words[w] & ((1 << (i & 63)) - 1)).bit_count()
        return r

    def select1(self, j):
        blocks = self.blocks
        lo, hi = 0, len(blocks) - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if blocks[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        j -= blocks[lo]
        k = lo << BLOCK_SHIFT
        words = self.words
        while True:
            c = words[k].bit_count()
            if j <= c:
                return (k << 6) + _word_select(words[k], j) + 1
            j -= c
            k += 1

    def select0(self, j):
        blocks = self.blocks
        lo, hi = 0, len(blocks) - 1
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if (mid << (BLOCK_SHIFT + 6)) - blocks[mid] < j:
                lo = mid
            else:
                hi = mid - 1
        j -= (lo << (BLOCK_SHIFT + 6)) - blocks[lo]
        k = lo << BLOCK_SHIFT
        words = self.words
        mask = (1 << 64) - 1
        while True:
            w = ~words[k] & mask
            c = w.bit_count()
            if j <= c:
                return (k << 6) + _word_select(w, j) + 1
            j -= c
            k += 1


class SparseBits(Bits):
    def __init__(self, n, stored, pos):
        self.n = int(n)
        self.stored = int(stored)
        self.pos = [int(p) for p in pos]
        # zeros-before key for selecting the non-stored bit
        self._gaps = [p - k for k, p in enumerate(self.pos)]
        m = len(self.pos)
        self.ones = m if self.stored else self.n - m

    def access(self, i):
        k = bisect_right(self.pos, i)
        if k and self.pos[k - 1] == i:
            return self.stored
        return 1 - self.stored

    def rank1(self, i):
        c = bisect_right(self.pos, i)
        return c if self.stored else i - c

    def _select_other(self, j):
        return j + bisect_right(self._gaps, j)

    def select1(self, j):
        return self.pos[j - 1] if self.stored else self._select_other(j)

    def select0(self, j):
        return self._select_other(j) if self.stored else self.pos[j - 1]


class Seq:
    n = 0

    def count(self, x):
        return self.counts[x]

    def access_many(self, idx):
        return np.fromiter((self.access(int(i)) for i in idx), dtype=np.uint8, count=len(idx))

    def rank_many(self, syms, idx):
        return np.fromiter(
            (self.rank(int(x), int(i)) for x, i in zip(syms, idx)), dtype=np.int64, count=len(idx)
        )

    def select_many(self, syms, js):
        return np.fromiter(
            (self.select(int(x), int(j)) for x, j in zip(syms, js)), dtype=np.int64, count=len(js)
        )


class Wavelet(Seq):
    def __init__(self, n, counts, nodes, left, right, mid, code_of, sym_of,
                 path_node, path_bit, path_len, maxd):
        self.n = int(n)
        self.counts = [int(c) for c in counts]
        self.nodes = list(nodes)
        self.left = [int(v) for v in left]
        self.right = [int(v) for v in right]
        self.mid = [int(v) for v in mid]
        self.code_of = [int(v) for v in code_of]
        self.sym_of = [int(v) for v in sym_of]
        maxd = int(maxd)
        self.paths = []
        for c in range(len(self.sym_of)):
            base = c * maxd
            steps = [
                (self.nodes[int(path_node[base + d])], int(path_bit[base + d]))
                for d in range(int(path_len[c]))
            ]
            steps.reverse()
            self.paths.append(steps)

    def access(self, i):
        if len(self.sym_of) == 1:
            return self.sym_of[0]
        v = 0
        while True:
            bv = self.nodes[v]
            if bv.access(i):
                i = bv.rank1(i)
                ch = self.right[v]
            else:
                i = i - bv.rank1(i)
                ch = self.left[v]
            if ch < 0:
                return self.sym_of[-ch - 1]
            v = ch

    def rank(self, x, i):
        c = self.code_of[x]
        if c < 0:
            return 0
        if len(self.sym_of) == 1:
            return i
        v = 0
        while True:
            bv = self.nodes[v]
            if c >= self.mid[v]:
                i = bv.rank1(i)
                ch = self.right[v]
            else:
                i = i - bv.rank1(i)
                ch = self.left[v]
            if ch < 0 or i == 0:
                return i
            v = ch

    def select(self, x, j):
        for bv, bit in self.paths[self.code_of[x]]:
            j = bv.select1(j) if bit else bv.select0(j)
        return j


class RelSeq(Seq):
    def __init__(self, n, counts, s1, b, bx, bp, bpx, dseq):
        self.n = int(n)
        self.counts = [int(c) for c in counts]
        self.s1 = s1
        self.b = b
        self.bx = bx
        self.bp = bp
        self.bpx = bpx
        self.dseq = dseq

    def access(self, i):
        bp = self.bp
        if bp.access(i):
            return self.dseq.access(bp.rank1(i))
        return self.s1.access(self.b.select0(i - bp.rank1(i)))

    def rank(self, x, i):
        ones = self.bp.rank1(i)
        j = i - ones
        r = 0
        vx = self.bx[x]
        if j > 0 and vx is not None:
            k = self.s1.rank(x, self.b.select0(j))
            r = k - vx.rank1(k)
        if ones > 0:
            r += self.dseq.rank(x, ones)
        return r

    def sub_select(self, x, i):
        return self.b.rank0(self.s1.select(x, self.bx[x].select0(i)))

    def select(self, x, i):
        v = self.bpx[x]
        if v.access(i):
            return self.bp.select1(self.dseq.select(x, v.rank1(i)))
        return self.bp.select0(self.sub_select(x, i - v.rank1(i)))


class FMCore:
    def __init__(self, seq, carr, syms):
        self.seq = seq
        self.n = seq.n
        self.carr = [int(c) for c in carr]
        self.syms = [int(s) for s in syms]
        self.starts = [self.carr[s] for s in self.syms]

    def _row_sym(self, i):
        return self.syms[bisect_right(self.starts, i - 1) - 1]

    def lf(self, i):
        c = self.seq.access(i)
        return self.carr[c] + self.seq.rank(c, i)

    def psi(self, i):
        c = self._row_sym(i)
        return self.seq.select(c, i - self.carr[c])

    def psi_binary(self, i):
        c = self._row_sym(i)
        j = i - self.carr[c]
        lo, hi = j, self.n
        rank = self.seq.rank
        while lo < hi:
            mid = (lo + hi) >> 1
            if rank(c, mid) >= j:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def lf_many(self, idx):
        return np.fromiter((self.lf(int(i)) for i in idx), dtype=np.int64, count=len(idx))

    def psi_many(self, idx):
        return np.fromiter((self.psi(int(i)) for i in idx), dtype=np.int64, count=len(idx))

    def psi_binary_many(self, idx):
        return np.fromiter((self.psi_binary(int(i)) for i in idx), dtype=np.int64, count=len(idx))


def lis_mask(values):
    """Boolean mask selecting one longest strictly increasing subsequence."""
    vals = [int(v) for v in values]
    m = len(vals)
    tails_val = []
    tails_idx = []
    prev = [-1] * m
    for k, v in enumerate(vals):
        lo = bisect_left(tails_val, v)
        prev[k] = tails_idx[lo - 1] if lo > 0 else -1
        if lo == len(tails_val):
            tails_val.append(v)
            tails_idx.append(k)
        else:
            tails_val[lo] = v
            tails_idx[lo] = k
    mask = np.zeros(m, dtype=bool)
    k = tails_idx[-1] if tails_idx else -1
    while k >= 0:
        mask[k] = True
        k = prev[k]
    return mask
