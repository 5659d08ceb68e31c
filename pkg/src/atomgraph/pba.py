"""Finite partial Boolean algebras stored as explicit tables.

Elements are integer IDs ``0..n-1`` assigned in input order; every element
also carries a unique string label. ``meet`` and ``join`` are ``n x n``
integer tables holding ``-1`` off the compatibility relation.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cliques import DEFAULT_CLIQUE_CAP, bits, enumerate_maximal_cliques
from .errors import CapExceeded, MalformedTable, SearchBudgetExceeded, UnknownElement

DEFAULT_ELEMENT_CAP = 4096
ISO_ELEMENT_CAP = 2048
DEFAULT_NODE_LIMIT = 200_000

Element = int | str


@dataclass(frozen=True, eq=False)
class PartialBooleanAlgebra:
    """A finite carrier with compatibility relation and partial operation tables."""

    labels: tuple[str, ...]
    compat: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    neg: np.ndarray
    zero: int
    one: int

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise MalformedTable("element labels must be unique")
        compat = np.array(self.compat, dtype=bool)
        meet = np.array(self.meet, dtype=np.int64)
        join = np.array(self.join, dtype=np.int64)
        neg = np.array(self.neg, dtype=np.int64)
        if compat.shape != (n, n) or meet.shape != (n, n) or join.shape != (n, n) or neg.shape != (n,):
            raise MalformedTable("table shapes do not match the number of elements")
        for table in (meet, join, neg):
            if table.size and (table.min() < -1 or table.max() >= n):
                raise MalformedTable("table entry out of range")
        if neg.size and neg.min() < 0:
            raise MalformedTable("neg must be total")
        if not (0 <= self.zero < n and 0 <= self.one < n):
            raise MalformedTable("zero/one out of range")
        for name, arr in (("compat", compat), ("meet", meet), ("join", join), ("neg", neg)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"PartialBooleanAlgebra(n={len(self)}, zero={self.labels[self.zero]!r}, one={self.labels[self.one]!r})"

    def index(self, x: Element) -> int:
        """Resolve an element given by ID (int) or label (str)."""
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if 0 <= x < len(self):
                return int(x)
            raise UnknownElement(f"no element with id {x}")
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"no element named {x!r}") from None

    def name(self, x: Element) -> str:
        return self.labels[self.index(x)]

    def names(self, xs: Iterable[Element]) -> list[str]:
        return [self.name(x) for x in xs]

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        """``L[a, b]`` iff ``a`` and ``b`` are compatible and ``meet(a, b) == a``."""
        n = len(self)
        out = self.compat & (self.meet == np.arange(n)[:, None])
        out.setflags(write=False)
        return out

    @cached_property
    def exclusive_matrix(self) -> np.ndarray:
        """``X[a, b]`` iff some ``c`` has ``a <= c`` and ``b <= neg(c)``."""
        L = self.leq_matrix.astype(np.float32)
        out = (L @ L[:, self.neg].T) > 0.5
        out.setflags(write=False)
        return out

    @cached_property
    def compat_masks(self) -> list[int]:
        """Compatibility adjacency as bitmasks, loops removed."""
        masks = []
        for i in range(len(self)):
            row = np.flatnonzero(self.compat[i])
            m = 0
            for j in row:
                if j != i:
                    m |= 1 << int(j)
            masks.append(m)
        return masks

    @classmethod
    def from_dict(cls, data: Mapping) -> "PartialBooleanAlgebra":
        """Build from the JSON algebra format.

        ``{"elements": [...], "zero": z, "one": o, "compat": [[a, b]],
        "meet": [[a, b, r]], "join": [[a, b, r]], "neg": [[a, r]]}``

        Unordered pairs are listed once, reflexive compat pairs and
        ``meet(a, a) = join(a, a) = a`` are implicit. A ``neg`` entry also
        fixes the reverse direction unless it is listed separately.
        """
        try:
            labels = tuple(str(e) for e in data["elements"])
            index = {lab: i for i, lab in enumerate(labels)}
            if len(index) != len(labels):
                raise MalformedTable("duplicate element names")

            def idx(x):
                try:
                    return index[str(x)]
                except KeyError:
                    raise UnknownElement(f"no element named {x!r}") from None

            n = len(labels)
            compat = np.eye(n, dtype=bool)
            for a, b in data.get("compat", []):
                i, j = idx(a), idx(b)
                compat[i, j] = compat[j, i] = True
            tables = {}
            for key in ("meet", "join"):
                t = np.full((n, n), -1, dtype=np.int64)
                t[np.arange(n), np.arange(n)] = np.arange(n)
                for a, b, r in data.get(key, []):
                    i, j, k = idx(a), idx(b), idx(r)
                    if not compat[i, j]:
                        raise MalformedTable(f"{key}({a}, {b}) defined but {a} and {b} are not compatible")
                    for p, q in ((i, j), (j, i)):
                        if t[p, q] not in (-1, k) and p != q:
                            raise MalformedTable(f"conflicting {key} entries for ({a}, {b})")
                        t[p, q] = k
                tables[key] = t
            neg = np.full(n, -1, dtype=np.int64)
            explicit = np.zeros(n, dtype=bool)
            for a, r in data.get("neg", []):
                i, k = idx(a), idx(r)
                if explicit[i] and neg[i] != k:
                    raise MalformedTable(f"conflicting neg entries for {a}")
                neg[i] = k
                explicit[i] = True
            for i in range(n):
                if explicit[i] and not explicit[neg[i]]:
                    k = neg[i]
                    if neg[k] not in (-1, i):
                        raise MalformedTable(f"conflicting implicit neg for {labels[k]}")
                    neg[k] = i
            if (neg < 0).any():
                missing = [labels[i] for i in np.flatnonzero(neg < 0)]
                raise MalformedTable(f"neg is not total; missing {missing}")
            return cls(labels, compat, tables["meet"], tables["join"], neg, idx(data["zero"]), idx(data["one"]))
        except KeyError as exc:
            if isinstance(exc, UnknownElement):
                raise
            raise MalformedTable(f"missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise MalformedTable(f"malformed algebra description: {exc}") from None

    def to_dict(self) -> dict:
        lab = self.labels
        n = len(self)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if self.compat[i, j]]
        return {
            "elements": list(lab),
            "zero": lab[self.zero],
            "one": lab[self.one],
            "compat": [[lab[i], lab[j]] for i, j in pairs],
            "meet": [[lab[i], lab[j], lab[self.meet[i, j]]] for i, j in pairs if self.meet[i, j] >= 0],
            "join": [[lab[i], lab[j], lab[self.join[i, j]]] for i, j in pairs if self.join[i, j] >= 0],
            "neg": [[lab[i], lab[self.neg[i]]] for i in range(n)],
        }

    def permuted(self, order: Sequence[int], labels: Sequence[str] | None = None) -> "PartialBooleanAlgebra":
        """Same algebra with old element ``order[k]`` renumbered as ``k``."""
        order = np.asarray(order, dtype=np.int64)
        n = len(self)
        if sorted(order.tolist()) != list(range(n)):
            raise ValueError("order must be a permutation of the element IDs")
        inv = np.empty(n, dtype=np.int64)
        inv[order] = np.arange(n)

        def remap(t):
            out = np.where(t >= 0, inv[np.maximum(t, 0)], -1)
            return out

        meet = remap(self.meet[np.ix_(order, order)])
        join = remap(self.join[np.ix_(order, order)])
        new_labels = tuple(labels) if labels is not None else tuple(self.labels[k] for k in order)
        return PartialBooleanAlgebra(
            new_labels, self.compat[np.ix_(order, order)], meet, join,
            inv[self.neg[order]], int(inv[self.zero]), int(inv[self.one]),
        )

    def same_tables(self, other: "PartialBooleanAlgebra") -> bool:
        """Identical IDs, tables and distinguished elements (labels ignored)."""
        return (
            len(self) == len(other)
            and self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.compat, other.compat)
            and np.array_equal(self.meet, other.meet)
            and np.array_equal(self.join, other.join)
            and np.array_equal(self.neg, other.neg)
        )


@dataclass(frozen=True)
class Context:
    """A Boolean subalgebra of ``parent``, stored as a set of element IDs."""

    parent: PartialBooleanAlgebra = field(repr=False, compare=False)
    members: frozenset[int]
    is_maximal: bool = True

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def atoms(self) -> tuple[int, ...]:
        """Atoms of the context taken as a Boolean algebra on its own."""
        B = self.parent
        S = self.sorted_members()
        L = B.leq_matrix
        out = []
        for a in S:
            if a == B.zero:
                continue
            below = [x for x in S if L[x, a]]
            if all(x in (B.zero, a) for x in below):
                out.append(a)
        return tuple(out)

    def labels(self) -> list[str]:
        return self.parent.names(self.sorted_members())


@dataclass(frozen=True)
class Violation:
    axiom: str
    witnesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [{"axiom": v.axiom, "witnesses": list(v.witnesses)} for v in self.violations],
        }


def _check_boolean(B: PartialBooleanAlgebra, S: Sequence[int]) -> list[Violation]:
    """Check that the element set ``S`` is a Boolean algebra under B's tables.

    Instead of testing each axiom on all triples we build the map sending
    an element to the set of context atoms below it, and require it to be a
    bijection onto the power set of the atoms that turns meet, join and neg
    into intersection, union and complement.
    """
    S = np.asarray(sorted(S), dtype=np.int64)
    k = len(S)
    lab = B.labels
    local = np.full(len(B), -1, dtype=np.int64)
    local[S] = np.arange(k)
    M = B.meet[np.ix_(S, S)]
    J = B.join[np.ix_(S, S)]
    N = B.neg[S]
    for name, table in (("meet", M), ("join", J)):
        undefined = np.argwhere(table < 0)
        if len(undefined):
            i, j = undefined[0]
            return [Violation(f"{name}-undefined", (lab[S[i]], lab[S[j]]))]
        escaped = np.argwhere(local[table] < 0)
        if len(escaped):
            i, j = escaped[0]
            return [Violation("closure-not-compatible", (lab[S[i]], lab[S[j]], lab[table[i, j]]))]
    if (local[N] < 0).any():
        i = int(np.flatnonzero(local[N] < 0)[0])
        return [Violation("closure-not-compatible", (lab[S[i]], lab[N[i]]))]
    Ml, Jl, Nl = local[M], local[J], local[N]
    z, o = local[B.zero], local[B.one]
    if z < 0 or o < 0:
        return [Violation("context-missing-bounds", tuple(lab[s] for s in S[:4]))]
    below = Ml == np.arange(k)[:, None]  # below[x, y]: x <= y inside S
    atoms = [a for a in range(k) if a != z and below[:, a].sum() == 2]
    if k != 2 ** len(atoms) or len(atoms) > 62:
        return [Violation("not-boolean:size", (f"|context|={k}", f"atoms={len(atoms)}"))]
    phi = np.zeros(k, dtype=np.int64)
    for bit, a in enumerate(atoms):
        phi |= below[a].astype(np.int64) << bit
    full = (1 << len(atoms)) - 1
    if len(np.unique(phi)) != k:
        return [Violation("not-boolean:not-atom-determined", tuple(lab[s] for s in S[:4]))]
    checks = (
        ("not-boolean:meet", phi[Ml] != (phi[:, None] & phi[None, :])),
        ("not-boolean:join", phi[Jl] != (phi[:, None] | phi[None, :])),
    )
    for axiom, bad in checks:
        hit = np.argwhere(bad)
        if len(hit):
            i, j = hit[0]
            return [Violation(axiom, (lab[S[i]], lab[S[j]]))]
    bad = np.flatnonzero(phi[Nl] != (full & ~phi))
    if len(bad):
        return [Violation("not-boolean:complement", (lab[S[bad[0]]],))]
    if phi[z] != 0 or phi[o] != full:
        return [Violation("not-boolean:bounds", (lab[B.zero], lab[B.one]))]
    return []


def _maximal_compatible_sets(B: PartialBooleanAlgebra, cap: int = DEFAULT_CLIQUE_CAP) -> list[list[int]]:
    return [bits(m) for m in enumerate_maximal_cliques(B.compat_masks, cap=cap)]


def validate_pba(
    candidate: PartialBooleanAlgebra | Mapping,
    cap: int = DEFAULT_ELEMENT_CAP,
) -> ValidationReport:
    """Check every partial Boolean algebra axiom on ``candidate``.

    ``candidate`` may be an algebra or a raw JSON-style mapping. Tables that
    define meet/join outside the compatibility relation raise
    :class:`MalformedTable`; everything else is reported as a violation.
    """
    if isinstance(candidate, Mapping):
        n_raw = len(candidate.get("elements", ()))
        if n_raw > cap:
            raise CapExceeded(f"{n_raw} elements exceeds cap {cap}")
        B = PartialBooleanAlgebra.from_dict(candidate)
    else:
        B = candidate
    n = len(B)
    if n > cap:
        raise CapExceeded(f"{n} elements exceeds cap {cap}")
    lab = B.labels
    for name, table in (("meet", B.meet), ("join", B.join)):
        off = np.argwhere((table >= 0) & ~B.compat)
        if len(off):
            i, j = off[0]
            raise MalformedTable(f"{name}({lab[i]}, {lab[j]}) defined but the pair is not compatible")

    out: list[Violation] = []
    if not B.compat.diagonal().all():
        i = int(np.flatnonzero(~B.compat.diagonal())[0])
        out.append(Violation("compat-reflexive", (lab[i],)))
    asym = np.argwhere(B.compat != B.compat.T)
    if len(asym):
        i, j = asym[0]
        out.append(Violation("compat-symmetric", (lab[i], lab[j])))
    missing = np.argwhere(B.compat & ((B.meet < 0) | (B.join < 0)))
    if len(missing):
        i, j = missing[0]
        out.append(Violation("table-undefined-on-compat", (lab[i], lab[j])))
    bad_neg = np.flatnonzero(B.neg[B.neg] != np.arange(n))
    if len(bad_neg):
        out.append(Violation("neg-involution", (lab[bad_neg[0]],)))
    if B.zero == B.one:
        out.append(Violation("zero-neq-one", (lab[B.zero],)))
    for d in (B.zero, B.one):
        lonely = np.flatnonzero(~B.compat[d])
        if len(lonely):
            out.append(Violation("bounds-compatible", (lab[d], lab[lonely[0]])))
    if out:
        return ValidationReport(tuple(out))
    for S in _maximal_compatible_sets(B):
        bad = _check_boolean(B, S)
        if bad:
            out.extend(bad)
            break
    return ValidationReport(tuple(out))


def closure(B: PartialBooleanAlgebra, seed: Iterable[Element], cap: int = DEFAULT_ELEMENT_CAP) -> frozenset[int]:
    """Close ``seed`` (plus 0 and 1) under neg and under meet/join of compatible pairs."""
    members = {B.zero, B.one} | {B.index(x) for x in seed}
    frontier = list(members)
    while frontier:
        x = frontier.pop()
        new = [int(B.neg[x])]
        for y in list(members):
            if B.compat[x, y]:
                new.extend((int(B.meet[x, y]), int(B.join[x, y])))
        for z in new:
            if z >= 0 and z not in members:
                members.add(z)
                frontier.append(z)
                if len(members) > cap:
                    raise CapExceeded(f"closure exceeds {cap} elements")
    return frozenset(members)


def leq(B: PartialBooleanAlgebra, a: Element, b: Element) -> bool:
    """``a <= b``: the pair is compatible and ``meet(a, b) == a``."""
    return bool(B.leq_matrix[B.index(a), B.index(b)])


def exclusive(B: PartialBooleanAlgebra, a: Element, b: Element) -> bool:
    """Whether some ``c`` has ``a <= c`` and ``b <= neg(c)``."""
    return bool(B.exclusive_matrix[B.index(a), B.index(b)])


def exclusivity_witness(B: PartialBooleanAlgebra, a: Element, b: Element) -> int | None:
    """Smallest ID ``c`` with ``a <= c`` and ``b <= neg(c)``, or ``None``."""
    i, j = B.index(a), B.index(b)
    L = B.leq_matrix
    hits = np.flatnonzero(L[i] & L[j, B.neg])
    return int(hits[0]) if len(hits) else None


def satisfies_lep(B: PartialBooleanAlgebra) -> bool:
    """Exclusive pairs are all compatible."""
    return bool(np.all(~B.exclusive_matrix | B.compat))


def is_transitive(B: PartialBooleanAlgebra) -> bool:
    L = B.leq_matrix.astype(np.float32)
    return bool(np.all(((L @ L) > 0.5) <= B.leq_matrix))


def atoms(B: PartialBooleanAlgebra) -> tuple[int, ...]:
    """Nonzero elements with nothing strictly between them and zero, in ID order."""
    L = B.leq_matrix
    below = L.sum(axis=0)  # counts x <= a, including 0 and a itself
    return tuple(int(a) for a in range(len(B)) if a != B.zero and below[a] == 2)


def maximal_contexts(B: PartialBooleanAlgebra, cap: int = DEFAULT_CLIQUE_CAP) -> list[Context]:
    """All maximal Boolean subalgebras, ordered by their sorted member IDs."""
    out = []
    for S in _maximal_compatible_sets(B, cap=cap):
        members = closure(B, S)
        out.append(Context(B, members, True))
    out.sort(key=Context.sorted_members)
    return out


# --- isomorphism -----------------------------------------------------------


def _refine(initial: list, neighbours: list[np.ndarray], rounds: int = 3) -> list[int]:
    """Colour refinement with content-based (label-free) colours."""
    colors = [hash(c) for c in initial]
    for _ in range(rounds):
        new = [hash((colors[v], tuple(sorted(colors[u] for u in neighbours[v])))) for v in range(len(colors))]
        if len(set(new)) == len(set(colors)):
            colors = new
            break
        colors = new
    return colors


def _algebra_colors(B: PartialBooleanAlgebra) -> list[int]:
    cached = B.__dict__.get("_iso_colors")
    if cached is not None:
        return cached
    L = B.leq_matrix
    deg = B.compat.sum(axis=1)
    down = L.sum(axis=0)
    up = L.sum(axis=1)
    initial = [
        (i == B.zero, i == B.one, int(deg[i]), int(down[i]), int(up[i]), int(deg[B.neg[i]]), int(down[B.neg[i]]))
        for i in range(len(B))
    ]
    neighbours = [np.flatnonzero(B.compat[i]) for i in range(len(B))]
    colors = _refine(initial, neighbours)
    B.__dict__["_iso_colors"] = colors
    return colors


def are_isomorphic(
    B1: PartialBooleanAlgebra,
    B2: PartialBooleanAlgebra,
    node_limit: int = DEFAULT_NODE_LIMIT,
    cap: int = ISO_ELEMENT_CAP,
) -> dict[int, int] | None:
    """Find a structure-preserving bijection ``B1 -> B2`` or return ``None``.

    Backtracking over colour classes; every assignment propagates through
    neg and through meet/join with already-assigned compatible elements.
    """
    n = len(B1)
    if n > cap or len(B2) > cap:
        raise CapExceeded(f"isomorphism search limited to {cap} elements")
    if n != len(B2) or int(B1.compat.sum()) != int(B2.compat.sum()):
        return None
    c1, c2 = _algebra_colors(B1), _algebra_colors(B2)
    if sorted(c1) != sorted(c2):
        return None

    f = np.full(n, -1, dtype=np.int64)
    g = np.full(n, -1, dtype=np.int64)
    assigned: list[int] = []
    nodes = 0

    def push(pairs: list[tuple[int, int]]) -> bool:
        """Assign and propagate forced pairs; False on conflict (caller undoes)."""
        queue = list(pairs)
        while queue:
            x, y = queue.pop()
            if f[x] == y:
                continue
            if f[x] != -1 or g[y] != -1 or c1[x] != c2[y]:
                return False
            if assigned:
                A = np.asarray(assigned)
                if not np.array_equal(B1.compat[x, A], B2.compat[y, f[A]]):
                    return False
            f[x], g[y] = y, x
            assigned.append(x)
            queue.append((int(B1.neg[x]), int(B2.neg[y])))
            A = np.asarray(assigned)
            both = A[B1.compat[x, A]]
            for z in both:
                fz = int(f[z])
                queue.append((int(B1.meet[x, z]), int(B2.meet[y, fz])))
                queue.append((int(B1.join[x, z]), int(B2.join[y, fz])))
        return True

    def undo(mark: int) -> None:
        while len(assigned) > mark:
            x = assigned.pop()
            g[f[x]] = -1
            f[x] = -1

    classes2: dict[int, list[int]] = {}
    for y in range(n):
        classes2.setdefault(c2[y], []).append(y)

    def search() -> bool:
        nonlocal nodes
        if len(assigned) == n:
            return True
        best_x, best_cands = -1, None
        for x in range(n):
            if f[x] != -1:
                continue
            cands = [y for y in classes2[c1[x]] if g[y] == -1]
            if best_cands is None or len(cands) < len(best_cands):
                best_x, best_cands = x, cands
                if len(cands) <= 1:
                    break
        for y in best_cands:
            nodes += 1
            if nodes > node_limit:
                raise SearchBudgetExceeded(f"isomorphism search exceeded {node_limit} nodes")
            mark = len(assigned)
            if push([(best_x, y)]) and search():
                return True
            undo(mark)
        return False

    if not push([(B1.zero, B2.zero), (B1.one, B2.one)]):
        return None
    if not search():
        return None
    if not _is_isomorphism(B1, B2, f):
        return None
    return {int(x): int(f[x]) for x in range(n)}


def _is_isomorphism(B1: PartialBooleanAlgebra, B2: PartialBooleanAlgebra, f: np.ndarray) -> bool:
    f = np.asarray(f)
    if f[B1.zero] != B2.zero or f[B1.one] != B2.one:
        return False
    if not np.array_equal(B2.compat[np.ix_(f, f)], B1.compat):
        return False
    if not np.array_equal(f[B1.neg], B2.neg[f]):
        return False
    mask = B1.compat
    for t1, t2 in ((B1.meet, B2.meet), (B1.join, B2.join)):
        lhs = f[np.where(mask, t1, 0)]
        rhs = t2[np.ix_(f, f)]
        if not np.array_equal(lhs[mask], rhs[mask]):
            return False
    return True
