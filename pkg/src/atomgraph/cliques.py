"""Maximal clique enumeration on bitmask adjacency.

Graphs here are plain lists of Python ints: ``adj[v]`` has bit ``u`` set iff
``u`` and ``v`` are adjacent (no self loops).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .errors import CapExceeded

DEFAULT_CLIQUE_CAP = 10**6


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def enumerate_maximal_cliques(adj: Sequence[int], cap: int = DEFAULT_CLIQUE_CAP) -> list[int]:
    """All maximal cliques as bitmasks, sorted by their sorted vertex tuples.

    Bron–Kerbosch with Tomita pivoting (pivot maximises ``|P ∩ N(u)|``).
    An empty graph has the single maximal clique ``0``.
    """
    n = len(adj)
    if n == 0:
        return [0]
    found: list[int] = []
    # explicit stack: contexts of large algebras can be deeper than the recursion limit
    stack = [(0, (1 << n) - 1, 0)]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            found.append(r)
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} maximal cliques")
            continue
        best, best_count = -1, -1
        for u in bits(p | x):
            c = (p & adj[u]).bit_count()
            if c > best_count:
                best, best_count = u, c
        for v in bits(p & ~adj[best]):
            stack.append((r | (1 << v), p & adj[v], x & adj[v]))
            p &= ~(1 << v)
            x |= 1 << v
    found.sort(key=bits)
    return found


def is_clique(adj: Sequence[int], mask: int) -> bool:
    for v in bits(mask):
        if (mask & ~(1 << v)) & ~adj[v]:
            return False
    return True
