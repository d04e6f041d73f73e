"""Reference kernels in numpy and plain Python.

Used when the compiled extension is unavailable, and as the comparison
baseline in the kernel tests and benchmark.  Clauses arrive as two parallel
``uint32`` arrays: ``pos`` holds the bits of positive literals, ``neg`` the
bits of negative ones.  A complete state ``z`` satisfies a clause iff
``(z & pos) | (~z & neg)`` is nonzero.
"""
from __future__ import annotations

import heapq

import numpy as np

BACKEND = "python"


def count_models(n, pos, neg):
    states = np.arange(1 << n, dtype=np.uint32)
    for p, q in zip(pos, neg):
        p = np.uint32(p)
        q = np.uint32(q)
        states = states[((states & p) | (~states & q)) != 0]
        if states.size == 0:
            break
    return int(states.size)


def accept_mask(codes, pos, neg):
    codes = np.asarray(codes, dtype=np.uint32)
    ok = np.ones(codes.shape[0], dtype=bool)
    for p, q in zip(pos, neg):
        ok &= ((codes & np.uint32(p)) | (~codes & np.uint32(q))) != 0
    return ok


def reject_counts(codes, pos, neg):
    codes = np.asarray(codes, dtype=np.uint32)
    pos = np.asarray(pos, dtype=np.uint32)
    neg = np.asarray(neg, dtype=np.uint32)
    out = np.zeros(pos.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // max(1, codes.shape[0]))
    for lo in range(0, pos.shape[0], step):
        p = pos[lo:lo + step, None]
        q = neg[lo:lo + step, None]
        sat = ((codes[None, :] & p) | (~codes[None, :] & q)) != 0
        out[lo:lo + step] = (~sat).sum(axis=1)
    return out


def rejection_sets(n, pos, neg):
    """States each clause rejects, as CSR ``(offsets, members)``.

    A clause rejects exactly the subcube where all its literals are false;
    members of each subcube are listed in ascending code order.
    """
    pos = np.asarray(pos, dtype=np.int64)
    neg = np.asarray(neg, dtype=np.int64)
    m = pos.shape[0]
    lits = pos | neg
    free = ((1 << n) - 1) & ~lits
    nfree = np.array([int(f).bit_count() for f in free], dtype=np.int64)
    sizes = np.left_shift(1, nfree)
    offsets = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    members = np.zeros(int(offsets[-1]), dtype=np.int64)
    for f in np.unique(nfree):
        rows = np.flatnonzero(nfree == f)
        t = np.arange(1 << int(f), dtype=np.int64)
        out = np.repeat(neg[rows, None], t.size, axis=1)
        k = np.zeros(rows.size, dtype=np.int64)
        fm = free[rows]
        for j in range(n):
            has = (fm >> j) & 1
            out |= (has[:, None] * ((t[None, :] >> k[:, None]) & 1)) << j
            k += has
        idx = offsets[rows, None] + t[None, :]
        members[idx] = out
    return offsets, members


def _bitset(members):
    acc = 0
    for z in members.tolist():
        acc |= 1 << z
    return acc


def _groups(offsets, members):
    return [members[offsets[c]:offsets[c + 1]] for c in range(len(offsets) - 1)]


def exhaustive_weakest(n, offsets, members, neg_codes):
    """Weakest subset of candidates whose rejections cover every negative.

    Candidate ``c`` rejects ``members[offsets[c]:offsets[c+1]]``.  Returns
    the chosen candidate indices (ascending) or ``None`` when even the full
    candidate set misses a negative.  Optimum is maximum model count, then
    fewest clauses, then lexicographically least index tuple.
    """
    total = 1 << n
    rej = [_bitset(r) for r in _groups(offsets, members)]
    need = _bitset(np.asarray(neg_codes, dtype=np.int64))
    everything = 0
    for r in rej:
        everything |= r
    if everything & need != need:
        return None
    m = len(rej)
    best = [None, None, None]  # count, size, selection mask

    def improves(count, size, sel):
        bc, bs, bm = best
        if bc is None or count > bc:
            return True
        if count < bc:
            return False
        if size != bs:
            return size < bs
        diff = sel ^ bm
        return bool(sel & diff & -diff)

    def dfs(j, union, sel, size):
        if union & need == need:
            count = total - union.bit_count()
            if improves(count, size, sel):
                best[0], best[1], best[2] = count, size, sel
            return
        if j == m:
            return
        if best[0] is not None:
            bound = total - (union | need).bit_count()
            if bound < best[0] or (bound == best[0] and size + 1 > best[1]):
                return
        dfs(j + 1, union | rej[j], sel | (1 << j), size + 1)
        dfs(j + 1, union, sel, size)

    dfs(0, 0, 0, 0)
    sel = best[2]
    return [j for j in range(m) if sel >> j & 1]


def _inverted(total, rejected):
    owners = [[] for _ in range(total)]
    for c, members in enumerate(rejected):
        for z in members.tolist():
            owners[z].append(c)
    return owners


def greedy_weaken(n, offsets, members, neg_codes):
    """Remove clauses one at a time, always the one freeing the most states.

    A clause is removable while every negative it rejects is also rejected by
    some other surviving clause.  Ties go to the lowest candidate index.
    Returns surviving candidate indices, or ``None`` if the start set is not
    already covering.
    """
    total = 1 << n
    rejected = _groups(offsets, members)
    m = len(rejected)
    is_neg = np.zeros(total, dtype=bool)
    is_neg[np.asarray(neg_codes, dtype=np.int64)] = True
    cnt = np.zeros(total, dtype=np.int64)
    cnt += np.bincount(members, minlength=total)
    if np.any(is_neg & (cnt == 0)):
        return None
    owners = _inverted(total, rejected)
    cnt = cnt.tolist()
    is_neg = is_neg.tolist()
    gain = [0] * m
    blocked = [False] * m
    for c, group in enumerate(rejected):
        for z in group.tolist():
            if cnt[z] == 1:
                gain[c] += 1
                if is_neg[z]:
                    blocked[c] = True
    alive = [True] * m
    heap = [(-gain[c], c) for c in range(m) if not blocked[c]]
    heapq.heapify(heap)
    while heap:
        g, c = heapq.heappop(heap)
        if not alive[c] or blocked[c] or -g != gain[c]:
            continue
        alive[c] = False
        for z in rejected[c].tolist():
            cnt[z] -= 1
            if cnt[z] == 1:
                for d in owners[z]:
                    if alive[d]:
                        break
                gain[d] += 1
                if is_neg[z]:
                    blocked[d] = True
                elif not blocked[d]:
                    heapq.heappush(heap, (-gain[d], d))
    return [c for c in range(m) if alive[c]]
