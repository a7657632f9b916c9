"""Independent brute-force counterparts of library routines."""
from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb

from hhverify.linsys import LinearSystem, conditions


def brute_force_filter(M: int, dMax: int, candidate: bool) -> list[LinearSystem]:
    """Every multiset the census filter admits, found by listing multisets.

    A system is admitted when all points but the smallest impose at most
    binom(d+2, 2) conditions; candidates must also reach that many in total.
    """
    out = []
    for d in range(1, dMax + 1):
        n = comb(d + 2, 2)
        parts = range(min(M, d), 0, -1)
        for k in range(1, n + 2):
            for ms in combinations_with_replacement(parts, k):
                head = sum(conditions(m) for m in ms[:-1])
                total = head + conditions(ms[-1])
                if head <= n and (not candidate or total >= n):
                    out.append(LinearSystem(d, ms))
    return out
