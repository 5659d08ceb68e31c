"""Atom graphs, maximal cliques, graph isomorphism and algebra reconstruction."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cliques import DEFAULT_CLIQUE_CAP, bits, enumerate_maximal_cliques
from .errors import CapExceeded, MalformedTable, SearchBudgetExceeded, UnknownElement
from .pba import PartialBooleanAlgebra, _refine, atoms, satisfies_lep, validate_pba

GRAPH_ISO_CAP = 64
RECONSTRUCT_VERTEX_CAP = 64
RECONSTRUCT_CLIQUE_CAP = 10**4
CLIQUE_VERTEX_CAP = 512


@dataclass(frozen=True)
class AtomGraph:
    """A simple undirected graph on named vertices.

    ``edges`` holds index pairs ``(i, j)`` with ``i < j``.
    """

    vertices: tuple[str, ...]
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        if len(set(vs)) != len(vs):
            raise MalformedTable("duplicate vertex names")
        norm = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise MalformedTable(f"self loop at {vs[i]!r}")
            if not (0 <= i < len(vs) and 0 <= j < len(vs)):
                raise MalformedTable("edge endpoint out of range")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "AtomGraph":
        """Build from vertex names and edges given by name."""
        vs = tuple(str(v) for v in vertices)
        index = {v: i for i, v in enumerate(vs)}
        try:
            pairs = [(index[str(u)], index[str(v)]) for u, v in edges]
        except KeyError as exc:
            raise UnknownElement(f"edge mentions unknown vertex {exc}") from None
        return cls(vs, frozenset(pairs))

    @classmethod
    def from_adjacency(cls, adjacency: np.ndarray, vertices: Sequence[str] | None = None) -> "AtomGraph":
        A = np.asarray(adjacency, dtype=bool)
        n = A.shape[0]
        vs = tuple(vertices) if vertices is not None else tuple(str(i) for i in range(n))
        return cls(vs, frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(A, 1)))))

    @classmethod
    def from_dict(cls, data: Mapping) -> "AtomGraph":
        try:
            return cls.from_edges(data["vertices"], [tuple(e) for e in data.get("edges", [])])
        except KeyError as exc:
            raise MalformedTable(f"missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise MalformedTable(f"malformed graph description: {exc}") from None

    def to_dict(self) -> dict:
        vs = self.vertices
        return {"vertices": list(vs), "edges": [[vs[i], vs[j]] for i, j in sorted(self.edges)]}

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, v) -> int:
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < len(self):
                return int(v)
            raise UnknownElement(f"no vertex with index {v}")
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise UnknownElement(f"no vertex named {v!r}") from None

    @cached_property
    def adjacency(self) -> np.ndarray:
        n = len(self)
        A = np.zeros((n, n), dtype=bool)
        for i, j in self.edges:
            A[i, j] = A[j, i] = True
        A.setflags(write=False)
        return A

    @cached_property
    def masks(self) -> tuple[int, ...]:
        out = [0] * len(self)
        for i, j in self.edges:
            out[i] |= 1 << j
            out[j] |= 1 << i
        return tuple(out)

    def has_edge(self, u, v) -> bool:
        return bool(self.adjacency[self.index(u), self.index(v)])

    def induced(self, vertices: Iterable) -> "AtomGraph":
        idx = [self.index(v) for v in vertices]
        sub = self.adjacency[np.ix_(idx, idx)]
        return AtomGraph.from_adjacency(sub, [self.vertices[i] for i in idx])

    def same_as(self, other: "AtomGraph") -> bool:
        """Vertex-for-vertex equality: same names, same named edges."""
        if set(self.vertices) != set(other.vertices):
            return False
        named = lambda g: {frozenset((g.vertices[i], g.vertices[j])) for i, j in g.edges}  # noqa: E731
        return named(self) == named(other)

    def to_dot(self, name: str = "G") -> str:
        """Graphviz source; each vertex lists the maximal cliques it lies in."""
        cover = maximal_cliques(self)
        member: dict[int, list[int]] = {}
        for k, c in enumerate(cover.cliques):
            for v in c:
                member.setdefault(v, []).append(k)
        lines = [f"graph {_dot_id(name)} {{"]
        for i, v in enumerate(self.vertices):
            cl = ",".join(str(k) for k in member.get(i, []))
            lines.append(f'  {_dot_id(v)} [cliques="{cl}", colorscheme=set312, color={member.get(i, [0])[0] % 12 + 1}];')
        for i, j in sorted(self.edges):
            lines.append(f"  {_dot_id(self.vertices[i])} -- {_dot_id(self.vertices[j])};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True)
class CliqueCover:
    """All maximal cliques of ``graph`` as sorted index tuples."""

    graph: AtomGraph = field(repr=False, compare=False)
    cliques: tuple[tuple[int, ...], ...]

    @property
    def masks(self) -> list[int]:
        return [sum(1 << v for v in c) for c in self.cliques]

    def named(self) -> list[list[str]]:
        return [[self.graph.vertices[v] for v in c] for c in self.cliques]

    def __len__(self) -> int:
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)


def maximal_cliques(G: AtomGraph, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueCover:
    """Every maximal clique, in lexicographic order of sorted vertex indices."""
    if len(G) > CLIQUE_VERTEX_CAP:
        raise CapExceeded(f"clique enumeration limited to {CLIQUE_VERTEX_CAP} vertices")
    cached = G.__dict__.get("_cliques")
    if cached is None or cached[0] != cap:
        masks = enumerate_maximal_cliques(G.masks, cap=cap) if len(G) else []
        cached = (cap, tuple(tuple(bits(m)) for m in masks))
        G.__dict__["_cliques"] = cached
    return CliqueCover(G, cached[1])


def atom_graph(B: PartialBooleanAlgebra) -> AtomGraph:
    """Vertices are the atoms of ``B``; distinct atoms are adjacent iff compatible."""
    A = list(atoms(B))
    sub = B.compat[np.ix_(A, A)].copy()
    np.fill_diagonal(sub, False)
    return AtomGraph.from_adjacency(sub, [B.labels[a] for a in A])


# --- graph isomorphism -----------------------------------------------------


def _graph_colors(G: AtomGraph) -> list[int]:
    cached = G.__dict__.get("_iso_colors")
    if cached is None:
        A = G.adjacency
        deg = A.sum(axis=1)
        nbrs = [np.flatnonzero(A[i]) for i in range(len(G))]
        initial = [(int(deg[i]), tuple(sorted(int(deg[j]) for j in nbrs[i]))) for i in range(len(G))]
        cached = _refine(initial, nbrs)
        G.__dict__["_iso_colors"] = cached
    return cached


def graphs_isomorphic(
    G1: AtomGraph,
    G2: AtomGraph,
    node_limit: int = 1_000_000,
    cap: int = GRAPH_ISO_CAP,
) -> dict[str, str] | None:
    """An adjacency-preserving bijection between vertex names, or ``None``."""
    n = len(G1)
    if n > cap or len(G2) > cap:
        raise CapExceeded(f"graph isomorphism limited to {cap} vertices")
    if n != len(G2) or len(G1.edges) != len(G2.edges):
        return None
    c1, c2 = _graph_colors(G1), _graph_colors(G2)
    if sorted(c1) != sorted(c2):
        return None
    A1, A2 = G1.adjacency, G2.adjacency
    # most constrained first: rare colours, then high degree
    freq: dict[int, int] = {}
    for c in c1:
        freq[c] = freq.get(c, 0) + 1
    order = sorted(range(n), key=lambda v: (freq[c1[v]], -int(A1[v].sum()), v))
    f = [-1] * n
    used = [False] * n
    nodes = 0

    def extend(k: int) -> bool:
        nonlocal nodes
        if k == n:
            return True
        v = order[k]
        done = order[:k]
        for y in range(n):
            if used[y] or c2[y] != c1[v]:
                continue
            nodes += 1
            if nodes > node_limit:
                raise SearchBudgetExceeded(f"graph isomorphism exceeded {node_limit} nodes")
            if all(A1[v, u] == A2[y, f[u]] for u in done):
                f[v], used[y] = y, True
                if extend(k + 1):
                    return True
                f[v], used[y] = -1, False
        return False

    if not extend(0):
        return None
    return {G1.vertices[v]: G2.vertices[f[v]] for v in range(n)}


# --- reconstruction --------------------------------------------------------


@dataclass(frozen=True)
class Realizable:
    algebra: PartialBooleanAlgebra
    atom_map: dict[str, int]

    realizable = True


@dataclass(frozen=True)
class NotRealizable:
    reason: str
    witnesses: tuple[str, ...] = ()

    realizable = False


ReconstructionResult = Realizable | NotRealizable


def reconstruct(
    G: AtomGraph,
    vertex_cap: int = RECONSTRUCT_VERTEX_CAP,
    clique_cap: int = RECONSTRUCT_CLIQUE_CAP,
    element_cap: int = 4096,
) -> ReconstructionResult:
    """Build the exclusive algebra whose atom graph is ``G``, if there is one.

    Elements are classes of pairs ``(C, A)`` with ``C`` a maximal clique and
    ``A`` a subset of it. ``(C1, A1)`` and ``(C2, A2)`` name the same element
    when ``(C1 - A1) | A2`` and ``A1 | (C2 - A2)`` are both maximal cliques.
    The candidate is then checked against every axiom; the first failure is
    returned as :class:`NotRealizable`.
    """
    n = len(G)
    if n > vertex_cap:
        raise CapExceeded(f"reconstruction limited to {vertex_cap} vertices")
    if n == 0:
        return NotRealizable("empty graph: zero and one would coincide")
    cover = maximal_cliques(G, cap=clique_cap)
    cliques = cover.masks
    if len(cliques) > clique_cap:
        raise CapExceeded(f"more than {clique_cap} maximal cliques")
    clique_set = set(cliques)
    names = G.vertices

    # pairs (clique index, subset mask) in canonical order
    pairs: list[tuple[int, int]] = []
    total = 0
    for ci, C in enumerate(cliques):
        total += 1 << C.bit_count()
        if total > 16 * element_cap:
            raise CapExceeded("too many (clique, subset) pairs")
        pairs.extend((ci, A) for A in _submasks(C))
    pair_id = {p: k for k, p in enumerate(pairs)}

    containing: dict[int, list[int]] = {}
    for ci, C in enumerate(cliques):
        for v in bits(C):
            containing.setdefault(v, []).append(ci)

    def supersets(mask: int) -> list[int]:
        if mask == 0:
            return list(range(len(cliques)))
        v = (mask & -mask).bit_length() - 1
        return [ci for ci in containing[v] if cliques[ci] & mask == mask]

    def related(c1: int, a1: int, c2: int, a2: int) -> bool:
        C1, C2 = cliques[c1], cliques[c2]
        return ((C1 & ~a1) | a2) in clique_set and (a1 | (C2 & ~a2)) in clique_set

    # union-find over pairs; partners found via D1 = (C1 - A1) | A2 must be a maximal clique
    parent = list(range(len(pairs)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges_rel: set[tuple[int, int]] = set()
    for k, (c1, a1) in enumerate(pairs):
        rest = cliques[c1] & ~a1
        for d1 in supersets(rest):
            a2 = cliques[d1] & ~rest
            for c2 in supersets(a2):
                if related(c1, a1, c2, a2):
                    j = pair_id[(c2, a2)]
                    edges_rel.add((min(k, j), max(k, j)))
                    rk, rj = find(k), find(j)
                    if rk != rj:
                        parent[max(rk, rj)] = min(rk, rj)

    classes: dict[int, list[int]] = {}
    for k in range(len(pairs)):
        classes.setdefault(find(k), []).append(k)
    if len(classes) > element_cap:
        raise CapExceeded(f"{len(classes)} elements exceeds cap {element_cap}")

    def describe(k: int) -> str:
        c, a = pairs[k]
        return f"C{c}:{{{','.join(names[v] for v in bits(a))}}}"

    # the identification must already be transitive
    for members in classes.values():
        for i, p in enumerate(members):
            for q in members[i + 1:]:
                if (p, q) not in edges_rel:
                    return NotRealizable(
                        "identification is not transitive", (describe(p), describe(q))
                    )

    roots = sorted(classes)  # smallest pair id = least (clique, subset) representative
    elem_of = {}
    for e, r in enumerate(roots):
        for k in classes[r]:
            elem_of[k] = e
    m = len(roots)
    zero = elem_of[pair_id[(0, 0)]]
    one = elem_of[pair_id[(0, cliques[0])]]
    if zero == one:
        return NotRealizable("zero and one coincide")

    # distinct vertices must give distinct atoms
    atom_elem: dict[int, int] = {}
    for v in range(n):
        ci = containing[v][0]
        atom_elem[v] = elem_of[pair_id[(ci, 1 << v)]]
    seen: dict[int, int] = {}
    for v, e in atom_elem.items():
        if e in seen:
            return NotRealizable("distinct vertices name the same element", (names[seen[e]], names[v]))
        seen[e] = v

    compat = np.eye(m, dtype=bool)
    meet = np.full((m, m), -1, dtype=np.int64)
    join = np.full((m, m), -1, dtype=np.int64)
    neg = np.full(m, -1, dtype=np.int64)
    for ci, C in enumerate(cliques):
        subs = list(_submasks(C))
        ids = [elem_of[pair_id[(ci, a)]] for a in subs]
        local = dict(zip(subs, ids))
        for a, x in zip(subs, ids):
            nx = local[C & ~a]
            if neg[x] not in (-1, nx):
                return NotRealizable("negation is not well defined", (describe(pair_id[(ci, a)]),))
            neg[x] = nx
            for b, y in zip(subs, ids):
                compat[x, y] = True
                for table, val, what in ((meet, local[a & b], "meet"), (join, local[a | b], "join")):
                    if table[x, y] not in (-1, val):
                        return NotRealizable(
                            f"{what} is not well defined",
                            (describe(pair_id[(ci, a)]), describe(pair_id[(ci, b)])),
                        )
                    table[x, y] = val

    labels = _class_labels(roots, pairs, names, zero, one, atom_elem)
    B = PartialBooleanAlgebra(tuple(labels), compat, meet, join, neg, zero, one)
    report = validate_pba(B, cap=element_cap)
    if not report.ok:
        v = report.violations[0]
        return NotRealizable(f"not a partial Boolean algebra: {v.axiom}", v.witnesses)
    if not satisfies_lep(B):
        return NotRealizable("exclusivity principle fails")
    atom_map = {names[v]: e for v, e in atom_elem.items()}
    if sorted(atoms(B)) != sorted(atom_map.values()):
        return NotRealizable("atoms of the candidate differ from the vertices")
    if not atom_graph(B).same_as(G):
        return NotRealizable("atom graph of the candidate differs from the input")
    return Realizable(B, atom_map)


def _submasks(mask: int):
    """All submasks of ``mask`` in increasing numeric order."""
    out = []
    sub = 0
    while True:
        out.append(sub)
        if sub == mask:
            break
        sub = (sub - mask) & mask
    return out


def _class_labels(roots, pairs, names, zero, one, atom_elem) -> list[str]:
    taken = set(names)
    zlab = "0" if "0" not in taken else "⊥"
    olab = "1" if "1" not in taken else "⊤"
    atom_label = {e: names[v] for v, e in atom_elem.items()}
    labels = []
    for e, r in enumerate(roots):
        if e in atom_label:
            labels.append(atom_label[e])
        elif e == zero:
            labels.append(zlab)
        elif e == one:
            labels.append(olab)
        else:
            labels.append("|".join(names[v] for v in bits(pairs[r][1])))
    return labels
