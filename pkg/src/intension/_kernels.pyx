# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as :mod:`intension._pykernels`."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy

cnp.import_array()

BACKEND = "cython"

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


def count_models(int n, pos, neg):
    cdef const uint32_t[:] p = np.ascontiguousarray(pos, dtype=np.uint32)
    cdef const uint32_t[:] q = np.ascontiguousarray(neg, dtype=np.uint32)
    cdef Py_ssize_t m = p.shape[0], c
    cdef uint64_t z, total = (<uint64_t>1) << n, count = 0
    cdef uint32_t s
    with nogil:
        for z in range(total):
            s = <uint32_t>z
            for c in range(m):
                if ((s & p[c]) | (~s & q[c])) == 0:
                    break
            else:
                count += 1
    return int(count)


def accept_mask(codes, pos, neg):
    cdef const uint32_t[:] z = np.ascontiguousarray(codes, dtype=np.uint32)
    cdef const uint32_t[:] p = np.ascontiguousarray(pos, dtype=np.uint32)
    cdef const uint32_t[:] q = np.ascontiguousarray(neg, dtype=np.uint32)
    out = np.ones(z.shape[0], dtype=np.uint8)
    cdef unsigned char[:] o = out
    cdef Py_ssize_t i, c, m = p.shape[0]
    with nogil:
        for i in range(z.shape[0]):
            for c in range(m):
                if ((z[i] & p[c]) | (~z[i] & q[c])) == 0:
                    o[i] = 0
                    break
    return out.astype(bool)


def reject_counts(codes, pos, neg):
    cdef const uint32_t[:] z = np.ascontiguousarray(codes, dtype=np.uint32)
    cdef const uint32_t[:] p = np.ascontiguousarray(pos, dtype=np.uint32)
    cdef const uint32_t[:] q = np.ascontiguousarray(neg, dtype=np.uint32)
    out = np.zeros(p.shape[0], dtype=np.int64)
    cdef int64_t[:] o = out
    cdef Py_ssize_t i, c
    cdef int64_t k
    with nogil:
        for c in range(p.shape[0]):
            k = 0
            for i in range(z.shape[0]):
                if ((z[i] & p[c]) | (~z[i] & q[c])) == 0:
                    k += 1
            o[c] = k
    return out


cdef struct Search:
    Py_ssize_t m
    Py_ssize_t words
    uint64_t total
    uint64_t *rej      # m x words
    uint64_t *need     # words
    uint64_t *stack    # (m + 1) x words
    int has_best
    uint64_t best_count
    Py_ssize_t best_size
    uint64_t best_sel


cdef inline uint64_t _pop(const uint64_t *a, Py_ssize_t w) nogil:
    cdef uint64_t k = 0
    cdef Py_ssize_t i
    for i in range(w):
        k += popcount64(a[i])
    return k


cdef void _dfs(Search *s, Py_ssize_t j, Py_ssize_t depth, uint64_t sel, Py_ssize_t size) nogil:
    cdef uint64_t *u = s.stack + depth * s.words
    cdef uint64_t *nxt
    cdef Py_ssize_t i
    cdef int covers = 1
    cdef uint64_t count, bound, diff
    for i in range(s.words):
        if (u[i] & s.need[i]) != s.need[i]:
            covers = 0
            break
    if covers:
        count = s.total - _pop(u, s.words)
        if not s.has_best or count > s.best_count:
            pass
        elif count < s.best_count:
            return
        elif size != s.best_size:
            if size > s.best_size:
                return
        else:
            diff = sel ^ s.best_sel
            if (sel & diff & (~diff + 1)) == 0:
                return
        s.has_best = 1
        s.best_count = count
        s.best_size = size
        s.best_sel = sel
        return
    if j == s.m:
        return
    if s.has_best:
        bound = 0
        for i in range(s.words):
            bound += popcount64(u[i] | s.need[i])
        bound = s.total - bound
        if bound < s.best_count or (bound == s.best_count and size + 1 > s.best_size):
            return
    nxt = u + s.words
    for i in range(s.words):
        nxt[i] = u[i] | s.rej[j * s.words + i]
    _dfs(s, j + 1, depth + 1, sel | ((<uint64_t>1) << j), size + 1)
    memcpy(nxt, u, s.words * sizeof(uint64_t))
    _dfs(s, j + 1, depth + 1, sel, size)


def rejection_sets(int n, pos, neg):
    cdef const uint32_t[:] p = np.ascontiguousarray(pos, dtype=np.uint32)
    cdef const uint32_t[:] q = np.ascontiguousarray(neg, dtype=np.uint32)
    cdef Py_ssize_t m = p.shape[0], c, k
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    offsets_np = np.zeros(m + 1, dtype=np.int64)
    cdef int64_t[:] off = offsets_np
    for c in range(m):
        off[c + 1] = off[c] + ((<int64_t>1) << popcount64(full & ~(<uint64_t>(p[c] | q[c]))))
    members_np = np.empty(off[m], dtype=np.int64)
    cdef int64_t[:] mem = members_np
    cdef uint64_t fmask, sub
    with nogil:
        for c in range(m):
            fmask = full & ~(<uint64_t>(p[c] | q[c]))
            k = off[c]
            sub = 0
            while True:
                mem[k] = <int64_t>(q[c] | sub)
                k += 1
                sub = (sub - fmask) & fmask
                if sub == 0:
                    break
    return offsets_np, members_np


def exhaustive_weakest(int n, offsets, members, neg_codes):
    cdef const int64_t[:] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const int64_t[:] mem = np.ascontiguousarray(members, dtype=np.int64)
    cdef const int64_t[:] negs = np.ascontiguousarray(neg_codes, dtype=np.int64)
    cdef Py_ssize_t m = off.shape[0] - 1
    if m > 63:
        raise ValueError("exhaustive search supports at most 63 candidates")
    cdef Search s
    cdef Py_ssize_t c, i
    cdef uint64_t z
    s.m = m
    s.total = (<uint64_t>1) << n
    s.words = <Py_ssize_t>((s.total + 63) // 64)
    s.rej = <uint64_t *> calloc(max(m, 1) * s.words, sizeof(uint64_t))
    s.need = <uint64_t *> calloc(s.words, sizeof(uint64_t))
    s.stack = <uint64_t *> calloc((m + 1) * s.words, sizeof(uint64_t))
    if s.rej == NULL or s.need == NULL or s.stack == NULL:
        free(s.rej); free(s.need); free(s.stack)
        raise MemoryError()
    try:
        for c in range(m):
            for i in range(off[c], off[c + 1]):
                z = <uint64_t>mem[i]
                s.rej[c * s.words + z // 64] |= (<uint64_t>1) << (z % 64)
        for i in range(negs.shape[0]):
            z = <uint64_t>negs[i]
            s.need[z // 64] |= (<uint64_t>1) << (z % 64)
        # feasibility: the union of all candidates must cover the negatives
        for c in range(m):
            for i in range(s.words):
                s.stack[i] |= s.rej[c * s.words + i]
        for i in range(s.words):
            if (s.stack[i] & s.need[i]) != s.need[i]:
                return None
            s.stack[i] = 0
        s.has_best = 0
        with nogil:
            _dfs(&s, 0, 0, 0, 0)
        return [c for c in range(m) if (s.best_sel >> c) & 1]
    finally:
        free(s.rej)
        free(s.need)
        free(s.stack)


# max-heap on (gain, -index) stored as a single key: gain * 2^32 + (2^32 - 1 - index)
cdef inline void _heap_push(int64_t *h, Py_ssize_t *size, int64_t key) nogil:
    cdef Py_ssize_t i = size[0], parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if h[parent] >= key:
            break
        h[i] = h[parent]
        i = parent
    h[i] = key


cdef inline int64_t _heap_pop(int64_t *h, Py_ssize_t *size) nogil:
    cdef int64_t top = h[0], last
    cdef Py_ssize_t i = 0, child
    size[0] -= 1
    last = h[size[0]]
    while True:
        child = 2 * i + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and h[child + 1] > h[child]:
            child += 1
        if h[child] <= last:
            break
        h[i] = h[child]
        i = child
    h[i] = last
    return top


def greedy_weaken(int n, offsets, members, neg_codes):
    cdef Py_ssize_t total = (<Py_ssize_t>1) << n
    offsets_np = np.ascontiguousarray(offsets, dtype=np.int64)
    members_np = np.ascontiguousarray(members, dtype=np.int64)
    cdef Py_ssize_t m = offsets_np.shape[0] - 1
    if m >= (1 << 31):
        raise ValueError("too many candidates")
    sizes = np.diff(offsets_np)
    owner_np = np.repeat(np.arange(m, dtype=np.int64), sizes)
    order = np.argsort(members_np, kind="stable")
    inv_np = np.ascontiguousarray(owner_np[order])
    cnt_np = np.bincount(members_np, minlength=total).astype(np.int64)
    inv_off_np = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(cnt_np, out=inv_off_np[1:])
    neg_np = np.zeros(total, dtype=np.uint8)
    neg_np[np.asarray(neg_codes, dtype=np.int64)] = 1
    if np.any((neg_np == 1) & (cnt_np == 0)):
        return None

    cdef const int64_t[:] off = offsets_np
    cdef const int64_t[:] mem = members_np
    cdef const int64_t[:] inv = inv_np
    cdef const int64_t[:] inv_off = inv_off_np
    cdef int64_t[:] cnt = cnt_np
    cdef const unsigned char[:] is_neg = neg_np
    gain_np = np.zeros(m, dtype=np.int64)
    blocked_np = np.zeros(m, dtype=np.uint8)
    alive_np = np.ones(m, dtype=np.uint8)
    cdef int64_t[:] gain = gain_np
    cdef unsigned char[:] blocked = blocked_np
    cdef unsigned char[:] alive = alive_np
    cdef Py_ssize_t c, d, k, t, heap_size = 0
    cdef int64_t z, key, low = (<int64_t>1 << 32) - 1
    cdef int64_t *heap = <int64_t *> malloc((m + members_np.shape[0] + 1) * sizeof(int64_t))
    if heap == NULL:
        raise MemoryError()
    try:
        with nogil:
            for c in range(m):
                for k in range(off[c], off[c + 1]):
                    z = mem[k]
                    if cnt[z] == 1:
                        gain[c] += 1
                        if is_neg[z]:
                            blocked[c] = 1
            for c in range(m):
                if not blocked[c]:
                    _heap_push(heap, &heap_size, (gain[c] << 32) + (low - c))
            while heap_size > 0:
                key = _heap_pop(heap, &heap_size)
                c = <Py_ssize_t>(low - (key & low))
                if not alive[c] or blocked[c] or (key >> 32) != gain[c]:
                    continue
                alive[c] = 0
                for k in range(off[c], off[c + 1]):
                    z = mem[k]
                    cnt[z] -= 1
                    if cnt[z] == 1:
                        d = -1
                        for t in range(inv_off[z], inv_off[z + 1]):
                            if alive[inv[t]]:
                                d = inv[t]
                                break
                        gain[d] += 1
                        if is_neg[z]:
                            blocked[d] = 1
                        elif not blocked[d]:
                            _heap_push(heap, &heap_size, (gain[d] << 32) + (low - d))
    finally:
        free(heap)
    return [c for c in range(m) if alive_np[c]]
