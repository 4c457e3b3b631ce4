"""Dependency-free string utilities."""

from __future__ import annotations


def edit_distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance between two strings."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    # two-row DP over the shorter string
    if len(b) < len(a):
        a, b = b, a
    prev = list(range(len(a) + 1))
    for j, cb in enumerate(b, start=1):
        cur = [j] + [0] * len(a)
        for i, ca in enumerate(a, start=1):
            cur[i] = min(
                prev[i] + 1,  # delete
                cur[i - 1] + 1,  # insert
                prev[i - 1] + (ca != cb),  # substitute / keep
            )
        prev = cur
    return prev[-1]
