"""Built-in algebras and generators of small random ones.

Algebras are assembled by gluing power-set contexts: each context maps
element labels to subsets of its own atom symbols, and a label shared by
two contexts denotes the same element.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from itertools import combinations

import numpy as np

from .errors import MalformedTable
from .pba import PartialBooleanAlgebra, satisfies_lep, validate_pba


def from_contexts(
    contexts: Sequence[Mapping[str, Iterable[str]]],
    zero: str = "0",
    one: str = "1",
) -> PartialBooleanAlgebra:
    """Glue power-set contexts into a partial Boolean algebra.

    Each context lists labelled subsets of its local atom symbols; the
    empty set and the full set may be omitted and default to ``zero`` and
    ``one``. Every subset must receive exactly one label. Compatibility is
    co-membership in some context and the operations come from the set
    operations of that context. Disagreeing contexts raise
    :class:`MalformedTable`.
    """
    labels: list[str] = [zero, one]
    index = {zero: 0, one: 1}
    local_tables = []
    for ci, ctx in enumerate(contexts):
        by_set: dict[frozenset, str] = {}
        universe: set[str] = set()
        for lab, subset in ctx.items():
            subset = frozenset(subset)
            universe |= subset
            if subset in by_set and by_set[subset] != lab:
                raise MalformedTable(f"context {ci}: {by_set[subset]!r} and {lab!r} denote the same set")
            by_set[subset] = lab
        full = frozenset(universe)
        by_set.setdefault(frozenset(), zero)
        by_set.setdefault(full, one)
        if by_set[frozenset()] != zero or by_set[full] != one:
            raise MalformedTable(f"context {ci}: bounds must be labelled {zero!r} and {one!r}")
        if len(by_set) != 2 ** len(universe):
            raise MalformedTable(f"context {ci}: {len(by_set)} labels for {2 ** len(universe)} subsets")
        if len(set(by_set.values())) != len(by_set):
            raise MalformedTable(f"context {ci}: a label names two different sets")
        for lab in sorted(by_set.values(), key=lambda s: (len(_set_of(by_set, s)), s)):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        local_tables.append((by_set, full))

    n = len(labels)
    compat = np.eye(n, dtype=bool)
    meet = np.full((n, n), -1, dtype=np.int64)
    join = np.full((n, n), -1, dtype=np.int64)
    neg = np.full(n, -1, dtype=np.int64)

    def put(table, i, j, k, what):
        if table[i, j] not in (-1, k):
            raise MalformedTable(f"contexts disagree on {what}({labels[i]}, {labels[j]})")
        table[i, j] = k

    for by_set, full in local_tables:
        items = [(index[lab], s) for s, lab in by_set.items()]
        for i, s in items:
            k = index[by_set[full - s]]
            if neg[i] not in (-1, k):
                raise MalformedTable(f"contexts disagree on neg({labels[i]})")
            neg[i] = k
            for j, t in items:
                compat[i, j] = True
                put(meet, i, j, index[by_set[s & t]], "meet")
                put(join, i, j, index[by_set[s | t]], "join")
    return PartialBooleanAlgebra(tuple(labels), compat, meet, join, neg, 0, 1)


def _set_of(by_set, label):
    for s, lab in by_set.items():
        if lab == label:
            return s
    raise KeyError(label)


def boolean_algebra(n: int, names: Sequence[str] | None = None) -> PartialBooleanAlgebra:
    """The power-set algebra of an ``n``-set; atoms are named ``names`` (default ``x0..``)."""
    names = list(names) if names is not None else [f"x{i}" for i in range(n)]
    if len(names) != n:
        raise ValueError("need one name per atom")
    ctx = {}
    for r in range(1, n):
        for combo in combinations(range(n), r):
            ctx["|".join(names[i] for i in combo)] = {names[i] for i in combo}
    if n == 0:
        raise ValueError("the one-element algebra has zero == one")
    ctx["1"] = set(names)
    return from_contexts([ctx])


def b1() -> PartialBooleanAlgebra:
    """Two 8-element contexts sharing ``{0, 1, c, ~c}``; ``c`` is an atom of both."""
    c1 = {"a1": "a", "b1": "b", "c": "c", "~c": "ab", "~b1": "ac", "~a1": "bc"}
    c2 = {"a2": "a", "b2": "b", "c": "c", "~c": "ab", "~b2": "ac", "~a2": "bc"}
    return from_contexts([c1, c2])


def b2() -> PartialBooleanAlgebra:
    """Same twelve elements as :func:`b1`, but ``~c`` is an atom of the first context.

    The first context is the power set of ``{a1, b1, ~c}`` and the second
    that of ``{a2, b2, c}``; ``c = a1 | b1`` in the first.
    """
    c1 = {"a1": "a", "b1": "b", "~c": "n", "c": "ab", "~b1": "an", "~a1": "bn"}
    c2 = {"a2": "a", "b2": "b", "c": "c", "~c": "ab", "~b2": "ac", "~a2": "bc"}
    return from_contexts([c1, c2])


def b2_prime() -> PartialBooleanAlgebra:
    """``{0, a1, b1, a2, b2, 1}`` with contexts ``{0, a1, b1, 1}`` and ``{0, a2, b2, 1}``."""
    return from_contexts([{"a1": "a", "b1": "b"}, {"a2": "a", "b2": "b"}])


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def random_glued(
    rng: np.random.Generator,
    max_elements: int = 12,
    max_contexts: int = 3,
    max_atoms_per_context: int = 3,
    identifications: int | tuple[int, int] | None = None,
    mixed_ranks: bool = False,
) -> PartialBooleanAlgebra | None:
    """Glue random power-set contexts along random element identifications.

    ``identifications`` is a count or an inclusive ``(low, high)`` range to
    draw it from. Returns ``None`` when the draw is inconsistent or too
    large. With ``mixed_ranks`` each identification glues an atom of one
    context to a coatom of another, which is how exclusivity tends to
    break. The result is not validated; callers filter with :func:`validate_pba`.
    """
    m = int(rng.integers(1, max_contexts + 1))
    sizes = [int(rng.integers(1, max_atoms_per_context + 1)) for _ in range(m)]
    uf = _UnionFind()
    for i, k in enumerate(sizes):
        uf.union((0, 0), (i, 0))
        uf.union((0, (1 << sizes[0]) - 1), (i, (1 << k) - 1))
    proper = [(i, x) for i, k in enumerate(sizes) for x in range(1, (1 << k) - 1)]
    if identifications is None:
        identifications = (0, 3)
    if isinstance(identifications, tuple):
        identifications = int(rng.integers(identifications[0], identifications[1] + 1))
    if m > 1 and proper:
        for _ in range(identifications):
            i, x = proper[int(rng.integers(len(proper)))]
            j, y = proper[int(rng.integers(len(proper)))]
            if i == j:
                continue
            if mixed_ranks:
                x = 1 << int(rng.integers(sizes[i]))
                y = ((1 << sizes[j]) - 1) ^ (1 << int(rng.integers(sizes[j])))
            uf.union((i, x), (j, y))
            uf.union((i, ((1 << sizes[i]) - 1) ^ x), (j, ((1 << sizes[j]) - 1) ^ y))
    contexts = []
    for i, k in enumerate(sizes):
        ctx = {}
        for x in range(1 << k):
            root = uf.find((i, x))
            ctx[f"e{root[0]}_{root[1]}"] = {f"t{b}" for b in range(k) if x >> b & 1}
        if len(ctx) != 1 << k:
            return None
        contexts.append(ctx)
    zero_label = "e{}_{}".format(*uf.find((0, 0)))
    one_label = "e{}_{}".format(*uf.find((0, (1 << sizes[0]) - 1)))
    try:
        B = from_contexts(contexts, zero=zero_label, one=one_label)
    except MalformedTable:
        return None
    if len(B) > max_elements:
        return None
    names = ["0", "1"] + [f"e{i}" for i in range(2, len(B))]
    return B.permuted(range(len(B)), labels=names)


def random_pbas(seed: int, count: int, max_elements: int = 12, **kwargs) -> list[PartialBooleanAlgebra]:
    """``count`` validated random glued algebras (not necessarily distinct)."""
    rng = np.random.default_rng(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count + 1000:
            raise RuntimeError("random generator failed to produce enough valid algebras")
        B = random_glued(rng, max_elements=max_elements, **kwargs)
        if B is not None and validate_pba(B).ok:
            out.append(B)
    return out


def random_epbas(seed: int, count: int, max_elements: int = 32, **kwargs) -> list[PartialBooleanAlgebra]:
    """Like :func:`random_pbas` but keeps only algebras satisfying exclusivity."""
    rng = np.random.default_rng(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 500 * count + 1000:
            raise RuntimeError("random generator failed to produce enough exclusive algebras")
        B = random_glued(rng, max_elements=max_elements, **kwargs)
        if B is not None and validate_pba(B).ok and satisfies_lep(B):
            out.append(B)
    return out
