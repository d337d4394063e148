"""Small enumeration helpers: subsets, set partitions, Bell numbers."""

from __future__ import annotations

import itertools


def subsets(items, minsize=0, maxsize=None):
    """All subsets of ``items`` as frozensets, smallest first."""
    items = sorted(items)
    if maxsize is None:
        maxsize = len(items)
    for k in range(minsize, maxsize + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def set_partitions(items, min_block=1, min_blocks=0):
    """All set partitions of ``items`` as tuples of frozensets.

    Blocks are ordered by their smallest element, so each partition is
    produced exactly once.
    """
    items = sorted(items)

    def rec(remaining):
        if not remaining:
            yield ()
            return
        first, rest = remaining[0], remaining[1:]
        # the block containing `first` is chosen first, which orders blocks
        for extra in subsets(rest):
            block = frozenset({first}) | extra
            if len(block) < min_block:
                continue
            leftover = [x for x in rest if x not in extra]
            for tail in rec(leftover):
                yield (block,) + tail

    for part in rec(items):
        if len(part) >= min_blocks:
            yield part


def bell(n):
    """Number of set partitions of an n-element set."""
    if n < 0:
        raise ValueError(n)
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
