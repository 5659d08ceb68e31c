"""Dense primal-dual interior-point method for small semidefinite programs.

Primal:  maximise <C, X>  s.t.  <A_k, X> = b_k,  X psd
Dual:    minimise b . y   s.t.  Z = sum_k y_k A_k - C psd

Constraint matrices are symmetric and given sparsely as entry lists.
Search direction is HKM with Mehrotra predictor-corrector.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import SolverFailure


@dataclass(frozen=True)
class SparseSym:
    """Symmetric matrix given by (row, col, value) entries; both triangles listed."""

    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "SparseSym":
        i = np.arange(n)
        return cls(i, i, np.ones(n))

    @classmethod
    def offdiag(cls, i: int, j: int, value: float = 0.5) -> "SparseSym":
        """``value`` at (i, j) and (j, i)."""
        return cls(np.array([i, j]), np.array([j, i]), np.array([value, value]))


@dataclass(frozen=True)
class SDPResult:
    primal: float
    dual: float
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    iterations: int
    primal_infeasibility: float
    dual_infeasibility: float

    @property
    def gap(self) -> float:
        return abs(self.primal - self.dual)

    @property
    def value(self) -> float:
        return 0.5 * (self.primal + self.dual)


def _max_step(M: np.ndarray, dM: np.ndarray) -> float:
    """Largest ``a`` with ``M + a dM`` psd (``M`` positive definite)."""
    L = np.linalg.cholesky(M)
    Li = sla.solve_triangular(L, np.eye(len(M)), lower=True)
    S = Li @ dM @ Li.T
    lam = np.linalg.eigvalsh((S + S.T) / 2)[0]
    return np.inf if lam >= 0 else -1.0 / lam


def solve_sdp(
    C: np.ndarray,
    constraints: Sequence[SparseSym],
    b: Sequence[float],
    tol: float = 1e-9,
    max_iter: int = 100,
) -> SDPResult:
    """Solve the primal/dual pair above to relative gap and infeasibility ``tol``."""
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    m = len(constraints)
    b = np.asarray(b, dtype=float)
    ek = np.concatenate([np.full(len(a.vals), k) for k, a in enumerate(constraints)]).astype(np.int64)
    er = np.concatenate([a.rows for a in constraints]).astype(np.int64)
    ec = np.concatenate([a.cols for a in constraints]).astype(np.int64)
    ev = np.concatenate([a.vals for a in constraints]).astype(float)
    R = sp.csr_matrix((np.ones(len(ek)), (ek, np.arange(len(ek)))), shape=(m, len(ek)))

    def A(G):
        return np.bincount(ek, weights=ev * G[er, ec], minlength=m)

    def At(y):
        out = np.zeros((n, n))
        np.add.at(out, (er, ec), ev * y[ek])
        return out

    def schur(X, Zi):
        E = np.outer(ev, ev) * X[np.ix_(ec, er)] * Zi[np.ix_(er, ec)]
        M = R @ (R @ E.T).T
        return (M + M.T) / 2

    normA = np.sqrt(np.bincount(ek, weights=ev**2, minlength=m))
    alpha0 = n * max(1.0, float(np.max((1 + np.abs(b)) / (1 + normA))))
    beta0 = (1 + max(float(normA.max()), np.linalg.norm(C))) / np.sqrt(n)
    X = alpha0 * np.eye(n)
    Z = beta0 * np.eye(n)
    y = np.zeros(m)
    normb, normC = 1 + np.linalg.norm(b), 1 + np.linalg.norm(C)
    I = np.eye(n)
    history = {}

    for it in range(1, max_iter + 1):
        rp = b - A(X)
        Rd = C - At(y) + Z
        pobj, dobj = float(np.sum(C * X)), float(b @ y)
        pinf = np.linalg.norm(rp) / normb
        dinf = np.linalg.norm(Rd) / normC
        relgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        history = {"iterations": it, "primal_infeasibility": pinf, "dual_infeasibility": dinf, "relative_gap": relgap}
        if relgap < tol and pinf < tol and dinf < tol:
            return SDPResult(pobj, dobj, X, y, Z, it, float(pinf), float(dinf))
        mu = float(np.sum(X * Z)) / n
        try:
            Lz = np.linalg.cholesky(Z)
        except np.linalg.LinAlgError:
            raise SolverFailure("dual slack lost positive definiteness", history) from None
        Zi = sla.cho_solve((Lz, True), I)
        Zi = (Zi + Zi.T) / 2
        M = schur(X, Zi)
        try:
            cf = sla.cho_factor(M)
            solve = lambda r: sla.cho_solve(cf, r)  # noqa: E731
        except np.linalg.LinAlgError:
            lu = sla.lu_factor(M)
            solve = lambda r: sla.lu_solve(lu, r)  # noqa: E731
        XRdZi = X @ Rd @ Zi

        def direction(K):
            # K is the complementarity target minus X Z, multiplied by Zi on the right
            dy = solve(A(K + XRdZi) - rp)
            dZ = At(dy) - Rd
            dX = K - X @ dZ @ Zi
            return dy, dZ, (dX + dX.T) / 2

        dya, dZa, dXa = direction(-X)
        ap = min(1.0, _max_step(X, dXa))
        ad = min(1.0, _max_step(Z, dZa))
        mu_aff = float(np.sum((X + ap * dXa) * (Z + ad * dZa))) / n
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3))
        K = (sigma * mu * I - dXa @ dZa) @ Zi - X
        dy, dZ, dX = direction(K)
        gamma = 0.9 + 0.09 * min(ap, ad)
        ap = min(1.0, gamma * _max_step(X, dX))
        ad = min(1.0, gamma * _max_step(Z, dZ))
        X = X + ap * dX
        X = (X + X.T) / 2
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = (Z + Z.T) / 2
        if not (np.isfinite(X).all() and np.isfinite(Z).all()):
            raise SolverFailure("iterates became non-finite", history)
    raise SolverFailure(f"no convergence in {max_iter} iterations", history)
