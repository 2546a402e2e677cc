"""Pure-Python selection-probability kernel.

Same algorithm as the compiled kernel: a memoized recursion over
(candidate subset, remaining objectives) bitmask pairs, with identical
profiles deduplicated into multiplicity groups and objectives that no
longer discriminate dropped before recursing. Python integers serve as
masks, so this backend has no limit on pool size or objective count.
"""

from __future__ import annotations

import numpy as np


def plex_groups(scores: np.ndarray, mults: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """Per-instance lexicase win probability for each distinct profile.

    scores is an (n, d) int64 matrix of distinct score profiles, mults the
    positive multiplicity of each profile, eps the per-objective retention
    threshold. Entry i of the result is the probability that one given
    individual carrying profile i wins a single selection event; the
    results satisfy sum_i result[i] * mults[i] == 1.
    """
    n, d = scores.shape
    # Plain Python ints beat numpy scalars inside the recursion.
    rows = [tuple(int(v) for v in row) for row in scores]
    counts = [int(m) for m in mults]
    thresh = [float(e) for e in eps]
    full_mask = (1 << n) - 1
    all_objs = (1 << d) - 1
    memo: dict[tuple[int, int], list[float]] = {}

    def solve(mask: int, objmask: int) -> list[float]:
        key = (mask, objmask)
        hit = memo.get(key)
        if hit is not None:
            return hit
        members = [i for i in range(n) if mask >> i & 1]
        if len(members) == 1:
            res = [0.0] * n
            res[members[0]] = 1.0
            memo[key] = res
            return res
        remaining = objmask
        branches = []
        for j in range(d):
            if not objmask >> j & 1:
                continue
            col = [rows[i][j] for i in members]
            best = max(col)
            elite = 0
            for i, s in zip(members, col):
                if s + thresh[j] >= best:
                    elite |= 1 << i
            if elite == mask:
                # Everyone is elite: the objective cannot filter this
                # subset (or any subset of it), so drop it outright.
                remaining &= ~(1 << j)
            else:
                branches.append((j, elite))
        if remaining != objmask:
            res = solve(mask, remaining)
        elif not branches:
            total = sum(counts[i] for i in members)
            res = [0.0] * n
            for i in members:
                res[i] = counts[i] / total
        else:
            acc = [0.0] * n
            for j, elite in branches:
                sub = solve(elite, remaining & ~(1 << j))
                for i in range(n):
                    acc[i] += sub[i]
            k = len(branches)
            res = [v / k for v in acc]
        memo[key] = res
        return res

    groups = solve(full_mask, all_objs)
    return np.array([groups[i] / counts[i] for i in range(n)], dtype=np.float64)
