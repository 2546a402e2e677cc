# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled selection-probability kernel.

Mirrors kernels._plex_pure exactly but runs the recursion over C-level
uint64 masks, which caps it at 64 distinct profiles and 64 objectives.
The dispatcher routes larger inputs to the pure backend.
"""

import numpy as np


ctypedef unsigned long long u64


cdef object _solve(u64 mask, u64 objmask, dict memo,
                   const long long[:, ::1] scores, const long long[::1] mults,
                   const double[::1] eps, int n, int d):
    cdef object key = (mask, objmask)
    cached = memo.get(key)
    if cached is not None:
        return cached

    cdef int i, j, count = 0, single = -1
    for i in range(n):
        if mask >> i & 1ULL:
            count += 1
            single = i

    result = np.zeros(n, dtype=np.float64)
    cdef double[::1] res = result

    if count == 1:
        res[single] = 1.0
        memo[key] = result
        return result

    cdef u64 remaining = objmask
    cdef u64 elites[64]
    cdef int objs[64]
    cdef int nb = 0
    cdef u64 elite
    cdef long long best
    cdef double limit
    cdef bint first

    for j in range(d):
        if not objmask >> j & 1ULL:
            continue
        best = 0
        first = True
        for i in range(n):
            if mask >> i & 1ULL:
                if first or scores[i, j] > best:
                    best = scores[i, j]
                    first = False
        limit = (<double>best) - eps[j]
        elite = 0
        for i in range(n):
            if mask >> i & 1ULL and <double>scores[i, j] >= limit:
                elite |= 1ULL << i
        if elite == mask:
            remaining &= ~(1ULL << j)
        else:
            elites[nb] = elite
            objs[nb] = j
            nb += 1

    cdef long long total
    cdef double[::1] sub
    if remaining != objmask:
        result = _solve(mask, remaining, memo, scores, mults, eps, n, d)
    elif nb == 0:
        total = 0
        for i in range(n):
            if mask >> i & 1ULL:
                total += mults[i]
        for i in range(n):
            if mask >> i & 1ULL:
                res[i] = (<double>mults[i]) / (<double>total)
    else:
        for j in range(nb):
            child = _solve(elites[j], remaining & ~(1ULL << objs[j]),
                           memo, scores, mults, eps, n, d)
            sub = child
            for i in range(n):
                res[i] += sub[i]
        for i in range(n):
            res[i] /= nb

    memo[key] = result
    return result


def plex_groups(scores, mults, eps):
    """Per-instance lexicase win probability for each distinct profile.

    Contract identical to kernels._plex_pure.plex_groups; rejects pools
    with more than 64 distinct profiles or objectives.
    """
    scores_arr = np.ascontiguousarray(scores, dtype=np.int64)
    mults_arr = np.ascontiguousarray(mults, dtype=np.int64)
    eps_arr = np.ascontiguousarray(eps, dtype=np.float64)
    cdef int n = scores_arr.shape[0]
    cdef int d = scores_arr.shape[1]
    if n > 64 or d > 64:
        raise ValueError("native kernel is limited to 64 profiles and 64 objectives")
    cdef u64 full_mask = (<u64>1 << n) - 1 if n < 64 else <u64>0 - 1
    cdef u64 all_objs = (<u64>1 << d) - 1 if d < 64 else <u64>0 - 1
    memo = {}
    groups = _solve(full_mask, all_objs, memo, scores_arr, mults_arr, eps_arr, n, d)
    return groups / mults_arr
