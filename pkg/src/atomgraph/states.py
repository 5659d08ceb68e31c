"""States on algebras and on graphs, 0-1 states and the restriction/extension maps."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import CapExceeded, LepRequired, NotAtomSpanned, SolverFailure, UnknownElement
from .graph import AtomGraph, atom_graph, maximal_cliques
from .pba import PartialBooleanAlgebra, ValidationReport, Violation, atoms, maximal_contexts, satisfies_lep

TOL = 1e-9
STATE_CAP = 10**6


def _as_vector(names: Sequence[str], values, what: str) -> np.ndarray:
    n = len(names)
    if isinstance(values, Mapping):
        index = {v: i for i, v in enumerate(names)}
        out = np.full(n, np.nan)
        for k, val in values.items():
            if str(k) not in index:
                raise UnknownElement(f"{what} {k!r} does not exist")
            out[index[str(k)]] = float(val)
        if np.isnan(out).any():
            missing = [names[i] for i in np.flatnonzero(np.isnan(out))]
            raise UnknownElement(f"no value given for {what}s {missing}")
        return out
    out = np.asarray(values, dtype=float)
    if out.shape != (n,):
        raise ValueError(f"expected {n} values, got shape {out.shape}")
    return out


@dataclass(frozen=True, eq=False)
class AlgebraState:
    """Probability per element of ``algebra``, indexed by element ID."""

    algebra: PartialBooleanAlgebra = field(repr=False)
    values: np.ndarray

    def __post_init__(self):
        v = _as_vector(self.algebra.labels, self.values, "element")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, x) -> float:
        return float(self.values[self.algebra.index(x)])

    def as_dict(self) -> dict[str, float]:
        return {lab: float(v) for lab, v in zip(self.algebra.labels, self.values)}


@dataclass(frozen=True, eq=False)
class GraphState:
    """Probability per vertex with every maximal clique summing to one."""

    graph: AtomGraph = field(repr=False)
    values: np.ndarray

    def __post_init__(self):
        v = _as_vector(self.graph.vertices, self.values, "vertex")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, v) -> float:
        return float(self.values[self.graph.index(v)])

    def as_dict(self) -> dict[str, float]:
        return {lab: float(v) for lab, v in zip(self.graph.vertices, self.values)}

    def check(self, tol: float = TOL) -> ValidationReport:
        return _check_clique_sums(self.graph, self.values, tol, exact=True)


@dataclass(frozen=True, eq=False)
class Substate(GraphState):
    """Like :class:`GraphState` but clique sums need only be at most one."""

    def check(self, tol: float = TOL) -> ValidationReport:
        return _check_clique_sums(self.graph, self.values, tol, exact=False)


def _check_clique_sums(G: AtomGraph, p: np.ndarray, tol: float, exact: bool) -> ValidationReport:
    out = []
    bad = np.flatnonzero((p < -tol) | (p > 1 + tol))
    if len(bad):
        out.append(Violation("range", (G.vertices[bad[0]],)))
    for clique in maximal_cliques(G):
        s = float(p[list(clique)].sum())
        if (exact and abs(s - 1) > tol) or (not exact and s > 1 + tol):
            out.append(Violation("clique-sum", tuple(G.vertices[v] for v in clique) + (repr(s),)))
            break
    return ValidationReport(tuple(out))


def is_state(B: PartialBooleanAlgebra, p, tol: float = TOL) -> ValidationReport:
    """Check range, ``p(0) = 0``, complements and modularity on compatible pairs.

    ``p`` may be an :class:`AlgebraState`, a mapping from labels or an array
    indexed by element ID. The report is truthy iff ``p`` is a state.
    """
    if isinstance(p, AlgebraState):
        p = p.values
    v = _as_vector(B.labels, p, "element")
    lab = B.labels
    out = []
    bad = np.flatnonzero((v < -tol) | (v > 1 + tol))
    if len(bad):
        out.append(Violation("range", (lab[bad[0]],)))
    if abs(v[B.zero]) > tol:
        out.append(Violation("p(0)=0", (lab[B.zero],)))
    bad = np.flatnonzero(np.abs(v[B.neg] - (1 - v)) > tol)
    if len(bad):
        out.append(Violation("p(~x)=1-p(x)", (lab[bad[0]],)))
    i, j = np.nonzero(B.compat)
    lhs = v[B.join[i, j]] + v[B.meet[i, j]]
    rhs = v[i] + v[j]
    bad = np.flatnonzero(np.abs(lhs - rhs) > tol)
    if len(bad):
        k = bad[0]
        out.append(Violation("p(x|y)+p(x&y)=p(x)+p(y)", (lab[i[k]], lab[j[k]])))
    return ValidationReport(tuple(out))


def restrict_state(B: PartialBooleanAlgebra, p, tol: float = TOL) -> GraphState:
    """Restrict a state on ``B`` to the atoms of ``B``."""
    if not satisfies_lep(B):
        raise LepRequired("restriction to the atom graph needs an exclusive algebra")
    values = p.values if isinstance(p, AlgebraState) else _as_vector(B.labels, p, "element")
    report = is_state(B, values, tol)
    if not report.ok:
        raise ValueError(f"not a state: {report.violations[0]}")
    q = GraphState(atom_graph(B), values[list(atoms(B))])
    assert q.check(tol * 10).ok, "restriction of a state must be a graph state"
    return q


def _atom_decompositions(B: PartialBooleanAlgebra):
    """Per maximal context: (context atoms, members, atoms-below incidence)."""
    cached = B.__dict__.get("_atom_decomp")
    if cached is not None:
        return cached
    A = set(atoms(B))
    L = B.leq_matrix
    out = []
    for C in maximal_contexts(B):
        catoms = list(C.atoms())
        if not set(catoms) <= A:
            raise LepRequired("a context atom is not an atom of the algebra")
        members = list(C.sorted_members())
        inc = L[np.ix_(catoms, members)]
        for col, b in enumerate(members):
            below = [catoms[r] for r in np.flatnonzero(inc[:, col])]
            acc = B.zero
            for a in below:
                acc = int(B.join[acc, a])
                if acc < 0:
                    raise NotAtomSpanned(f"{B.labels[b]} is not a join of atoms")
            if acc != b:
                raise NotAtomSpanned(f"{B.labels[b]} is not the join of the atoms below it")
        out.append((catoms, members, inc.astype(float)))
    B.__dict__["_atom_decomp"] = out
    return out


def extend_state(B: PartialBooleanAlgebra, q, tol: float = TOL) -> AlgebraState:
    """The unique state on ``B`` whose restriction to the atoms is ``q``.

    ``b`` gets the sum of ``q`` over the atoms below it in any maximal
    context holding ``b``; all such contexts must agree.
    """
    if not satisfies_lep(B):
        raise LepRequired("extension from the atom graph needs an exclusive algebra")
    G = atom_graph(B)
    if isinstance(q, GraphState):
        if tuple(q.graph.vertices) != G.vertices:
            q = {v: q[v] for v in G.vertices}
        else:
            q = q.values
    qv = _as_vector(G.vertices, q, "vertex")
    report = _check_clique_sums(G, qv, tol, exact=True)
    if not report.ok:
        raise ValueError(f"not a graph state: {report.violations[0]}")
    atom_ids = list(atoms(B))
    by_atom = np.zeros(len(B))
    by_atom[atom_ids] = qv
    values = np.full(len(B), np.nan)
    for catoms, members, inc in _atom_decompositions(B):
        vals = by_atom[catoms] @ inc
        prev = values[members]
        clash = ~np.isnan(prev) & (np.abs(prev - vals) > tol)
        if clash.any():
            b = members[int(np.flatnonzero(clash)[0])]
            raise AssertionError(f"extension is not well defined at {B.labels[b]}")
        values[members] = vals
    values = np.clip(values, 0.0, 1.0)
    p = AlgebraState(B, values)
    assert is_state(B, p, tol * 10).ok, "extension of a graph state must be a state"
    return p


def iter_zero_one_states(G: AtomGraph):
    """Yield vertex sets meeting every maximal clique exactly once, in lexicographic order."""
    cliques = maximal_cliques(G).masks
    n = len(G)
    if n == 0:
        return
    in_cliques = [[k for k, c in enumerate(cliques) if c >> v & 1] for v in range(n)]
    vmask = [sum(1 << k for k in in_cliques[v]) for v in range(n)]

    def gen(covered: int, chosen: list[int]):
        if covered == (1 << len(cliques)) - 1:
            yield tuple(sorted(chosen))
            return
        best_opts = None
        for k, c in enumerate(cliques):
            if covered >> k & 1:
                continue
            opts = [v for v in range(n) if c >> v & 1 and not vmask[v] & covered]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
                if len(opts) <= 1:
                    break
        for v in best_opts:
            chosen.append(v)
            yield from gen(covered | vmask[v], chosen)
            chosen.pop()

    yield from gen(0, [])


def zero_one_states(G: AtomGraph, cap: int = STATE_CAP) -> list[GraphState]:
    """All 0-1 graph states, ordered by their sorted supports."""
    supports = []
    for s in iter_zero_one_states(G):
        supports.append(s)
        if len(supports) > cap:
            raise CapExceeded(f"more than {cap} 0-1 states")
    supports.sort()
    out = []
    for s in supports:
        v = np.zeros(len(G))
        v[list(s)] = 1.0
        out.append(GraphState(G, v))
    return out


def has_ks_property(G: AtomGraph) -> bool:
    """True iff ``G`` admits no 0-1 state."""
    return next(iter_zero_one_states(G), None) is None


def _clique_incidence(G: AtomGraph) -> np.ndarray:
    cover = maximal_cliques(G)
    M = np.zeros((len(cover), len(G)))
    for k, c in enumerate(cover.cliques):
        M[k, list(c)] = 1.0
    return M


def state_feasible(G: AtomGraph, tol: float = TOL) -> GraphState | None:
    """A graph state maximising the smallest vertex value, or ``None`` if none exists.

    Any feasible point would do; the max-min choice keeps values away from
    the boundary when the polytope allows it.
    """
    n = len(G)
    if n == 0:
        return None
    M = _clique_incidence(G)
    m = M.shape[0]
    # variables: p_0..p_{n-1}, t ; maximise t
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_eq = np.hstack([M, np.zeros((m, 1))])
    b_eq = np.ones(m)
    A_ub = np.hstack([-np.eye(n), np.ones((n, 1))])  # t - p_v <= 0
    b_ub = np.zeros(n)
    bounds = [(0.0, 1.0)] * n + [(0.0, 1.0)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 2:
        return None
    if res.status != 0:
        raise SolverFailure("state feasibility LP failed", {"status": res.status, "message": res.message})
    p = _polish(M, np.clip(res.x[:n], 0.0, 1.0))
    resid = float(np.abs(M @ p - 1).max())
    if resid > tol:
        raise SolverFailure("state feasibility LP returned an inaccurate point", {"residual": resid})
    return GraphState(G, p)


def _polish(M: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Project ``p`` onto ``{M p = 1}`` if that keeps it inside [0, 1]."""
    r = M @ p - 1
    if not np.any(r):
        return p
    step = np.linalg.lstsq(M, r, rcond=None)[0]
    q = p - step
    if q.min() >= 0 and q.max() <= 1 and np.abs(M @ q - 1).max() <= np.abs(r).max():
        return q
    return p


def random_graph_state(G: AtomGraph, rng: np.random.Generator) -> GraphState | None:
    """Random graph state: Dirichlet draw per clique, then L1 projection onto the state polytope."""
    n = len(G)
    M = _clique_incidence(G)
    m = M.shape[0]
    target = np.zeros(n)
    count = np.zeros(n)
    for k in range(m):
        idx = np.flatnonzero(M[k])
        target[idx] += rng.dirichlet(np.ones(len(idx)))
        count[idx] += 1
    target /= np.maximum(count, 1)
    # variables p (n), s (n): minimise sum s with s >= |p - target|
    c = np.concatenate([np.zeros(n), np.ones(n)])
    I = np.eye(n)
    A_ub = np.block([[I, -I], [-I, -I]])
    b_ub = np.concatenate([target, -target])
    A_eq = np.hstack([M, np.zeros((m, n))])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=np.ones(m),
                  bounds=[(0.0, 1.0)] * n + [(0.0, None)] * n, method="highs")
    if res.status == 2:
        return None
    if res.status != 0:
        raise SolverFailure("projection LP failed", {"status": res.status, "message": res.message})
    return GraphState(G, _polish(M, np.clip(res.x[:n], 0.0, 1.0)))
