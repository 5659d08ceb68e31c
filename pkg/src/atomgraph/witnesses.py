"""Noncontextuality witnesses on exclusivity graphs.

Three numbers bound the weighted sum ``sum_v w(v) p(v)``:

* ``alpha``: over 0-1 (noncontextual) assignments, computed exactly;
* ``theta``: over quantum assignments, the weighted Lovász number;
* ``alpha_star``: over all substates, the fractional packing number.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .cliques import bits
from .errors import CapExceeded, MalformedTable, SearchBudgetExceeded, SolverFailure, UnknownElement
from .graph import AtomGraph, maximal_cliques
from .lp import rational_lp
from .sdp import SparseSym, solve_sdp

WITNESS_VERTEX_CAP = 64
ALPHA_NODE_LIMIT = 10**7
THETA_GAP = 1e-6
THETA_TOL = 1e-4
LP_TOL = 1e-9


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative vertex weights, keyed by vertex name."""

    weights: Mapping[str, int | float | Fraction]

    def __post_init__(self):
        clean = {}
        for k, v in self.weights.items():
            if isinstance(v, bool) or not isinstance(v, (int, float, Fraction)):
                raise MalformedTable(f"weight of {k!r} is not a number")
            if isinstance(v, float) and not math.isfinite(v):
                raise MalformedTable(f"weight of {k!r} is not finite")
            if v < 0:
                raise MalformedTable(f"weight of {k!r} is negative")
            clean[str(k)] = v
        object.__setattr__(self, "weights", clean)

    @classmethod
    def ones(cls, G: AtomGraph) -> "WeightFunction":
        return cls({v: 1 for v in G.vertices})

    @classmethod
    def from_dict(cls, data: Mapping) -> "WeightFunction":
        if not isinstance(data, Mapping) or not isinstance(data.get("weights"), Mapping):
            raise MalformedTable('weights must look like {"weights": {vertex: number}}')
        return cls(data["weights"])

    def to_dict(self) -> dict:
        return {"weights": {k: float(v) for k, v in self.weights.items()}}

    def scaled(self, lam: int | float | Fraction) -> "WeightFunction":
        return WeightFunction({k: v * lam for k, v in self.weights.items()})

    def exact(self, G: AtomGraph) -> list[Fraction]:
        """Weights in vertex order as exact rationals."""
        unknown = set(self.weights) - set(G.vertices)
        if unknown:
            raise UnknownElement(f"weights for unknown vertices {sorted(unknown)}")
        missing = [v for v in G.vertices if v not in self.weights]
        if missing:
            raise MalformedTable(f"no weight for vertices {missing}")
        return [Fraction(self.weights[v]) for v in G.vertices]

    def vector(self, G: AtomGraph) -> np.ndarray:
        return np.array([float(x) for x in self.exact(G)])


def _weights(G: AtomGraph, w: WeightFunction | None) -> WeightFunction:
    return WeightFunction.ones(G) if w is None else w


def _check_size(G: AtomGraph) -> None:
    if len(G) > WITNESS_VERTEX_CAP:
        raise CapExceeded(f"witnesses support at most {WITNESS_VERTEX_CAP} vertices, got {len(G)}")


@dataclass(frozen=True)
class AlphaResult:
    value: Fraction
    independent_set: tuple[str, ...]
    nodes: int


def alpha(G: AtomGraph, w: WeightFunction | None = None, node_limit: int = ALPHA_NODE_LIMIT) -> AlphaResult:
    """Exact weighted independence number by branch and bound.

    The bound at each node is a greedy weighted clique cover of the remaining
    candidates. Among optimal sets the lexicographically least (by sorted
    vertex index) is returned; zero-weight vertices are never included.
    """
    _check_size(G)
    wf = _weights(G, w).exact(G)
    scale = math.lcm(*(x.denominator for x in wf)) if wf else 1
    W = [int(x * scale) for x in wf]
    adj = G.masks
    by_weight = sorted((v for v in range(len(G)) if W[v] > 0), key=lambda v: (-W[v], v))
    best_w, best_set = 0, ()
    nodes = 0

    def bound(cand: int) -> int:
        cover: list[int] = []
        total = 0
        for v in by_weight:
            if not cand >> v & 1:
                continue
            for k, c in enumerate(cover):
                if c & ~adj[v] == 0:
                    cover[k] = c | (1 << v)
                    break
            else:
                cover.append(1 << v)
                total += W[v]
        return total

    stack: list[tuple[int, tuple[int, ...], int]] = [(sum(1 << v for v in by_weight), (), 0)]
    while stack:
        cand, chosen, cur = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise SearchBudgetExceeded(f"independent set search exceeded {node_limit} nodes")
        if cand == 0:
            if cur > best_w:
                best_w, best_set = cur, chosen
            continue
        if cur + bound(cand) <= best_w:
            continue
        v = (cand & -cand).bit_length() - 1
        # pushed in reverse so the include branch is explored first
        stack.append((cand & ~(1 << v), chosen, cur))
        stack.append((cand & ~adj[v] & ~(1 << v), chosen + (v,), cur + W[v]))
    return AlphaResult(Fraction(best_w, scale), tuple(G.vertices[v] for v in best_set), nodes)


@dataclass(frozen=True)
class ThetaResult:
    value: float
    primal: float
    dual: float
    iterations: int

    @property
    def gap(self) -> float:
        return abs(self.primal - self.dual)


def theta(G: AtomGraph, w: WeightFunction | None = None, gap: float = THETA_GAP) -> ThetaResult:
    """Weighted Lovász number.

    Solves max <sqrt(w) sqrt(w)^T, X> over psd X with unit trace and
    ``X_ij = 0`` on edges. Zero-weight vertices are dropped first.
    """
    _check_size(G)
    wv = _weights(G, w).vector(G)
    keep = np.flatnonzero(wv > 0)
    if len(keep) == 0:
        raise ValueError("theta needs a positive weight on at least one vertex")
    pos = {int(v): k for k, v in enumerate(keep)}
    n = len(keep)
    s = np.sqrt(wv[keep])
    cons = [SparseSym.identity(n)]
    for i, j in sorted(G.edges):
        if i in pos and j in pos:
            cons.append(SparseSym.offdiag(pos[i], pos[j]))
    res = solve_sdp(np.outer(s, s), cons, [1.0] + [0.0] * (len(cons) - 1))
    out = ThetaResult(res.value, res.primal, res.dual, res.iterations)
    if out.gap > gap:
        raise SolverFailure(
            "theta gap above certificate threshold",
            {"gap": out.gap, "iterations": res.iterations,
             "primal_infeasibility": res.primal_infeasibility, "dual_infeasibility": res.dual_infeasibility},
        )
    return out


@dataclass(frozen=True)
class AlphaStarResult:
    value: float | Fraction
    x: dict[str, float | Fraction]


def _packing_lp(G: AtomGraph):
    cover = maximal_cliques(G)
    A = np.zeros((len(cover), len(G)))
    for k, c in enumerate(cover.masks):
        A[k, bits(c)] = 1.0
    return A


def alpha_star(G: AtomGraph, w: WeightFunction | None = None, exact: bool = False) -> AlphaStarResult:
    """Fractional packing number: max w.x with x >= 0, x <= 1, clique sums <= 1.

    Only maximal cliques are needed; every clique sits inside one. With
    ``exact`` the LP is solved over the rationals.
    """
    wf = _weights(G, w).exact(G)
    A = _packing_lp(G)
    n = len(G)
    if exact:
        rows = [[Fraction(int(a)) for a in r] for r in A]
        rows += [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        res = rational_lp(wf, rows, [Fraction(1)] * len(rows))
        if res.status != "optimal":
            raise SolverFailure("rational packing LP did not reach an optimum", {"status": res.status})
        return AlphaStarResult(res.value, dict(zip(G.vertices, res.x)))
    wv = np.array([float(x) for x in wf])
    res = linprog(-wv, A_ub=A, b_ub=np.ones(len(A)), bounds=[(0.0, 1.0)] * n, method="highs")
    if res.status != 0:
        raise SolverFailure("packing LP failed", {"status": res.status, "message": res.message})
    x = np.clip(res.x, 0.0, 1.0)
    return AlphaStarResult(float(wv @ x), {v: float(t) for v, t in zip(G.vertices, x)})


@dataclass(frozen=True)
class WitnessReport:
    alpha: Fraction
    alpha_set: tuple[str, ...]
    theta: float
    theta_gap: float
    alpha_star: float
    alpha_star_x: dict[str, float]
    gap_found: bool
    tolerances: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "alpha": float(self.alpha),
            "alpha_exact": str(self.alpha),
            "alpha_set": list(self.alpha_set),
            "theta": self.theta,
            "theta_gap": self.theta_gap,
            "alpha_star": self.alpha_star,
            "alpha_star_x": dict(self.alpha_star_x),
            "gap_found": self.gap_found,
            "tolerances": dict(self.tolerances),
        }


def nc_inequality_report(G: AtomGraph, w: WeightFunction | None = None, tol: float = THETA_TOL) -> WitnessReport:
    """All three witnesses; ``gap_found`` means the classical bound is beaten by quantum ones."""
    w = _weights(G, w)
    a = alpha(G, w)
    if a.value == 0:
        t = ThetaResult(0.0, 0.0, 0.0, 0)
    else:
        t = theta(G, w)
    s = alpha_star(G, w)
    if not (float(a.value) <= t.value + tol and t.value <= s.value + tol):
        raise SolverFailure(
            "witness values out of order",
            {"alpha": float(a.value), "theta": t.value, "alpha_star": s.value},
        )
    return WitnessReport(
        alpha=a.value,
        alpha_set=a.independent_set,
        theta=t.value,
        theta_gap=t.gap,
        alpha_star=s.value,
        alpha_star_x=s.x,
        gap_found=float(a.value) < t.value - tol,
        tolerances={"gap_found": tol, "theta_gap": THETA_GAP, "alpha_star": LP_TOL},
    )
