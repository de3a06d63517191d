"""Compiled exhaustive scans over all committees of up to ~24 candidates.

Every rule that is scanned here scores a committee as a sum of per-voter
terms that depend only on ``|S|`` and ``|S & ballot|``. The caller tabulates
that term as ``table[k, a]`` and the kernel sums it over voters.
"""

import numpy as np
from numba import njit, types
from numba.extending import intrinsic


@intrinsic
def _popcount(typingctx, x):
    sig = types.int64(types.uint64)

    def codegen(context, builder, signature, args):
        return builder.ctpop(args[0])

    return sig, codegen


@njit(cache=True)
def scan(ballots, weights, m, table, include_empty):
    """Best total score plus, per committee size, the number of optimal
    committees and the smallest optimal mask of that size (-1 if none)."""
    n = ballots.shape[0]
    best = np.int64(-(1 << 62))
    counts = np.zeros(m + 1, np.int64)
    first = np.full(m + 1, -1, np.int64)
    start = 0 if include_empty else 1
    for s in range(start, 1 << m):
        su = np.uint64(s)
        k = _popcount(su)
        total = np.int64(0)
        for i in range(n):
            total += weights[i] * table[k, _popcount(su & ballots[i])]
        if total > best:
            best = total
            counts[:] = 0
            first[:] = -1
            counts[k] = 1
            first[k] = s
        elif total == best:
            if counts[k] == 0:
                first[k] = s
            counts[k] += 1
    return best, counts, first


@njit(cache=True)
def collect(ballots, weights, m, table, include_empty, target, kmin, kmax, cap):
    """Ascending masks scoring ``target`` with size in [kmin, kmax], at most ``cap``."""
    n = ballots.shape[0]
    out = np.empty(cap, np.int64)
    found = 0
    start = 0 if include_empty else 1
    for s in range(start, 1 << m):
        su = np.uint64(s)
        k = _popcount(su)
        if k < kmin or k > kmax:
            continue
        total = np.int64(0)
        for i in range(n):
            total += weights[i] * table[k, _popcount(su & ballots[i])]
        if total == target:
            out[found] = s
            found += 1
            if found == cap:
                break
    return out[:found]


def pack(ballots):
    """Deduplicate ballots into (masks, multiplicities) arrays for the kernels."""
    uniq: dict[int, int] = {}
    for b in ballots:
        uniq[b] = uniq.get(b, 0) + 1
    masks = np.fromiter(uniq.keys(), np.uint64, len(uniq))
    weights = np.fromiter(uniq.values(), np.int64, len(uniq))
    return masks, weights
