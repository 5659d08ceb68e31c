"""Quantum systems: finite sets of projectors closed into partial Boolean algebras."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, DimensionMismatch, MalformedTable, NotRankOne
from .graph import AtomGraph
from .pba import PartialBooleanAlgebra
from .states import AlgebraState, is_state

HERMITIAN_TOL = 1e-9
IDEMPOTENT_TOL = 1e-9
MERGE_TOL = 1e-8
COMMUTE_TOL = 1e-8
ORTHO_TOL = 1e-8
DENSITY_TOL = 1e-9
WARN_BAND = (1e-9, 1e-6)


@dataclass(frozen=True, eq=False)
class Projector:
    """A Hermitian idempotent ``d x d`` matrix with an optional name."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        M = np.array(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionMismatch(f"projector must be square, got {M.shape}")
        if np.linalg.norm(M - M.conj().T) > HERMITIAN_TOL:
            raise MalformedTable(f"projector {self.name!r} is not Hermitian")
        if np.linalg.norm(M @ M - M) > IDEMPOTENT_TOL:
            raise MalformedTable(f"projector {self.name!r} is not idempotent")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @classmethod
    def from_vector(cls, v, name: str = "") -> "Projector":
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), name)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))


def _clean(M: np.ndarray) -> np.ndarray:
    """Nearest projector to a numerically noisy Hermitian matrix."""
    H = (M + M.conj().T) / 2
    w, V = np.linalg.eigh(H)
    keep = V[:, w > 0.5]
    return keep @ keep.conj().T


class _Store:
    """Projectors with tolerance-based lookup."""

    def __init__(self, d: int):
        self.d = d
        self.mats: list[np.ndarray] = []
        self.buckets: dict[tuple, list[int]] = {}
        self.near: list[float] = []

    @staticmethod
    def _key(M: np.ndarray) -> tuple:
        r = np.round(np.concatenate([M.real.ravel(), M.imag.ravel()]) * 1e5).astype(np.int64)
        return tuple(r.tolist())

    def find(self, M: np.ndarray) -> int | None:
        for i in self.buckets.get(self._key(M), ()):
            if np.linalg.norm(self.mats[i] - M) <= MERGE_TOL:
                return i
        if not self.mats:
            return None
        dist = np.linalg.norm(np.asarray(self.mats) - M, axis=(1, 2))
        k = int(np.argmin(dist))
        if dist[k] <= MERGE_TOL:
            return k
        if dist[k] <= WARN_BAND[1]:
            self.near.append(float(dist[k]))
        return None

    def add(self, M: np.ndarray) -> tuple[int, bool]:
        i = self.find(M)
        if i is not None:
            return i, False
        self.mats.append(M)
        i = len(self.mats) - 1
        self.buckets.setdefault(self._key(M), []).append(i)
        return i, True


@dataclass(frozen=True, eq=False)
class QuantumSystem:
    """A finite partial Boolean subalgebra of the projector lattice.

    ``projectors[k]`` is the matrix of element ``k`` of ``algebra``.
    """

    projectors: np.ndarray
    algebra: PartialBooleanAlgebra
    generator_ids: tuple[int, ...]
    near_coincidences: tuple[float, ...] = field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return self.projectors.shape[1]

    @property
    def labels(self) -> tuple[str, ...]:
        return self.algebra.labels

    def __len__(self) -> int:
        return len(self.algebra)

    def matrix(self, x) -> np.ndarray:
        return self.projectors[self.algebra.index(x)]

    def ranks(self) -> np.ndarray:
        return np.rint(np.einsum("kii->k", self.projectors).real).astype(int)

    def find(self, M: np.ndarray) -> int | None:
        dist = np.linalg.norm(self.projectors - np.asarray(M), axis=(1, 2))
        k = int(np.argmin(dist))
        return k if dist[k] <= MERGE_TOL else None

    def to_dict(self) -> dict:
        return projectors_to_dict(
            [Projector(self.projectors[k], self.labels[k]) for k in range(len(self))]
        )


def _commutator_norms(M: np.ndarray, others: np.ndarray) -> np.ndarray:
    return np.linalg.norm(M @ others - others @ M, axis=(1, 2))


def generate_system(
    generators: Sequence[Projector | np.ndarray],
    cap: int = 4096,
    names: Sequence[str] | None = None,
    aliases: Mapping[str, np.ndarray] | None = None,
) -> QuantumSystem:
    """Close ``generators`` under complement and, for commuting pairs, product and join.

    Labels are the shortest expression found for each element; ``aliases``
    overrides the label of any element equal to the given matrix.
    """
    gens = [g if isinstance(g, Projector) else Projector(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].dim
    if any(g.dim != d for g in gens):
        raise DimensionMismatch("generators have different dimensions")
    if cap > 4096:
        raise CapExceeded("closure cap may not exceed 4096")
    if names is None:
        names = [g.name or f"P{k}" for k, g in enumerate(gens)]
    store = _Store(d)
    label: list[str] = []

    def add(M: np.ndarray, expr: str) -> int:
        i, new = store.add(M)
        if new:
            label.append(expr)
            if len(store.mats) > cap:
                raise CapExceeded(f"closure exceeds {cap} projectors")
        elif len(expr) < len(label[i]) and label[i] not in ("0", "1"):
            label[i] = expr
        return i

    add(np.zeros((d, d), dtype=complex), "0")
    add(np.eye(d, dtype=complex), "1")
    generator_ids = tuple(add(_clean(g.matrix), nm) for g, nm in zip(gens, names))
    for k, nm in zip(generator_ids, names):
        label[k] = nm

    done = 0
    while done < len(store.mats):
        x = done
        done += 1
        X = store.mats[x]
        add(_clean(np.eye(d) - X), _neg_expr(label[x]))
        others = np.asarray(store.mats[: done])
        comm = _commutator_norms(X, others)
        for y in np.flatnonzero(comm <= COMMUTE_TOL):
            y = int(y)
            if y == x:
                continue
            Y = store.mats[y]
            P = X @ Y
            add(_clean(P), f"({label[x]}&{label[y]})")
            add(_clean(X + Y - P), f"({label[x]}|{label[y]})")

    mats = np.asarray(store.mats)
    if aliases:
        for nm, M in aliases.items():
            i = store.find(np.asarray(M, dtype=complex))
            if i is None:
                raise MalformedTable(f"alias {nm!r} is not an element of the system")
            label[i] = nm
    algebra = _tables(mats, label)
    return QuantumSystem(mats, algebra, generator_ids, tuple(store.near))


def _neg_expr(e: str) -> str:
    if e == "0":
        return "1"
    if e == "1":
        return "0"
    if e.startswith("~"):
        return e[1:]
    return "~" + e


def _tables(mats: np.ndarray, labels: list[str]) -> PartialBooleanAlgebra:
    n, d, _ = mats.shape
    store = _Store(d)
    for M in mats:
        store.add(M)
    if len(store.mats) != n:
        raise MalformedTable("duplicate projectors in closure")
    compat = np.zeros((n, n), dtype=bool)
    for i in range(n):
        compat[i] = _commutator_norms(mats[i], mats) <= COMMUTE_TOL
    compat = compat & compat.T
    meet = np.full((n, n), -1, dtype=np.int64)
    join = np.full((n, n), -1, dtype=np.int64)
    neg = np.empty(n, dtype=np.int64)
    eye = np.eye(d)
    for i in range(n):
        k = store.find(_clean(eye - mats[i]))
        if k is None:
            raise MalformedTable("closure is missing a complement")
        neg[i] = k
        for j in np.flatnonzero(compat[i]):
            if j < i:
                continue
            P = mats[i] @ mats[j]
            a = store.find(_clean(P))
            b = store.find(_clean(mats[i] + mats[j] - P))
            if a is None or b is None:
                raise MalformedTable("closure is missing a meet or join")
            meet[i, j] = meet[j, i] = a
            join[i, j] = join[j, i] = b
    return PartialBooleanAlgebra(tuple(labels), compat, meet, join, neg, 0, 1)


def orthogonality_graph(projectors: Sequence[Projector]) -> AtomGraph:
    """Vertices are rank-one projectors; edges join orthogonal pairs."""
    mats = []
    for k, P in enumerate(projectors):
        if not isinstance(P, Projector):
            P = Projector(P, f"P{k}")
        if abs(np.trace(P.matrix).real - 1) > 1e-9:
            raise NotRankOne(f"{P.name or k!r} has trace {np.trace(P.matrix).real:.6g}")
        mats.append(P.matrix)
    names = [(P.name if isinstance(P, Projector) and P.name else f"P{k}") for k, P in enumerate(projectors)]
    M = np.asarray(mats)
    overlaps = np.abs(np.einsum("aij,bji->ab", M, M))
    adj = overlaps <= ORTHO_TOL
    np.fill_diagonal(adj, False)
    return AtomGraph.from_adjacency(adj, names)


# --- density matrices ------------------------------------------------------


def check_density(rho: np.ndarray, tol: float = DENSITY_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {rho.shape}")
    if np.linalg.norm(rho - rho.conj().T) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > tol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed mixed state (pure when ``rank == 1``)."""
    k = d if rank is None else rank
    G = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def density_to_state(rho: np.ndarray, Q: QuantumSystem, tol: float = DENSITY_TOL) -> AlgebraState:
    """Born-rule probabilities ``tr(rho P)`` for every element of ``Q``."""
    rho = check_density(rho, tol)
    if rho.shape[0] != Q.dim:
        raise DimensionMismatch(f"density matrix has dimension {rho.shape[0]}, system has {Q.dim}")
    values = np.einsum("ij,kji->k", rho, Q.projectors).real
    values = np.clip(values, 0.0, 1.0)
    p = AlgebraState(Q.algebra, values)
    report = is_state(Q.algebra, p, tol=1e-8)
    assert report.ok, f"Born probabilities are not a state: {report.violations}"
    return p


# --- built-in scenarios ----------------------------------------------------


def kcbs_vectors() -> np.ndarray:
    """Five unit vectors in R^3 with consecutive ones (mod 5) orthogonal."""
    c = np.cos(np.pi / 5)
    theta = np.arccos(np.sqrt(c / (1 + c)))
    i = np.arange(5)
    return np.stack(
        [np.full(5, np.cos(theta)), np.sin(theta) * np.cos(4 * np.pi * i / 5), np.sin(theta) * np.sin(4 * np.pi * i / 5)],
        axis=1,
    )


def scenario_kcbs() -> QuantumSystem:
    """System generated by the five KCBS projectors ``P0..P4``.

    ``P{i}{i+1}`` labels the complement of ``P{i} | P{i+1}``.
    """
    gens = [Projector.from_vector(v, f"P{k}") for k, v in enumerate(kcbs_vectors())]
    aliases = {}
    for i in range(5):
        j = (i + 1) % 5
        aliases[f"P{i}{j}"] = np.eye(3) - gens[i].matrix - gens[j].matrix
    return generate_system(gens, aliases=aliases)


def _pauli():
    Z = np.diag([1.0, -1.0]).astype(complex)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    return Z, X


def _eig_projectors(A: np.ndarray) -> dict[int, np.ndarray]:
    """Projectors onto the +1 and -1 eigenspaces of a ±1-valued observable."""
    d = A.shape[0]
    return {+1: (np.eye(d) + A) / 2, -1: (np.eye(d) - A) / 2}


def chsh_observables() -> dict[str, np.ndarray]:
    Z, X = _pauli()
    I2 = np.eye(2)
    return {
        "a": np.kron(Z, I2),
        "a'": np.kron(X, I2),
        "b": np.kron(I2, (Z + X) / np.sqrt(2)),
        "b'": np.kron(I2, (Z - X) / np.sqrt(2)),
    }


def chsh_atoms() -> list[Projector]:
    """The 16 joint eigenprojectors of the pairs (a,b), (a,b'), (a',b), (a',b')."""
    obs = chsh_observables()
    out = []
    for x in ("a", "a'"):
        for y in ("b", "b'"):
            px, py = _eig_projectors(obs[x]), _eig_projectors(obs[y])
            for s in (+1, -1):
                for t in (+1, -1):
                    name = f"{x}{'+' if s > 0 else '-'}{y}{'+' if t > 0 else '-'}"
                    out.append(Projector(px[s] @ py[t], name))
    return out


def scenario_chsh() -> QuantumSystem:
    """Two-qubit CHSH system generated by its 16 rank-one joint outcomes."""
    return generate_system(chsh_atoms())


FIG2_ANGLE = np.pi / 5


def fig2_vectors(phi: float = FIG2_ANGLE) -> dict[str, np.ndarray]:
    return {
        "a1": np.array([1.0, 0.0, 0.0]),
        "b1": np.array([0.0, 1.0, 0.0]),
        "c": np.array([0.0, 0.0, 1.0]),
        "a2": np.array([np.cos(phi), np.sin(phi), 0.0]),
        "b2": np.array([-np.sin(phi), np.cos(phi), 0.0]),
    }


def scenario_fig2() -> QuantumSystem:
    """Five rank-one projectors in dimension 3: two orthogonal triples sharing ``c``."""
    gens = [Projector.from_vector(v, k) for k, v in fig2_vectors().items()]
    return generate_system(gens)


# --- projector JSON --------------------------------------------------------


def projectors_to_dict(projectors: Sequence[Projector]) -> dict:
    d = projectors[0].dim if projectors else 0
    return {
        "dim": d,
        "projectors": [
            {"name": P.name, "re": P.matrix.real.tolist(), "im": P.matrix.imag.tolist()} for P in projectors
        ],
    }


def matrix_from_dict(entry: Mapping) -> np.ndarray:
    re = np.asarray(entry["re"], dtype=float)
    im = np.asarray(entry.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise MalformedTable("re and im parts have different shapes")
    return re + 1j * im


def projectors_from_dict(data: Mapping) -> list[Projector]:
    try:
        d = int(data["dim"])
        out = []
        for k, entry in enumerate(data["projectors"]):
            M = matrix_from_dict(entry)
            if M.shape != (d, d):
                raise DimensionMismatch(f"projector {k} has shape {M.shape}, expected {(d, d)}")
            out.append(Projector(M, str(entry.get("name", f"P{k}"))))
        return out
    except KeyError as exc:
        raise MalformedTable(f"missing field {exc}") from None
