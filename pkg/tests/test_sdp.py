import numpy as np
import pytest

from atomgraph.errors import SolverFailure
from atomgraph.sdp import SparseSym, solve_sdp


def lovasz(n, edges, **kw):
    cons = [SparseSym.identity(n)] + [SparseSym.offdiag(i, j) for i, j in edges]
    return solve_sdp(np.ones((n, n)), cons, [1.0] + [0.0] * len(edges), **kw)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_odd_cycles_closed_form(n):
    c = np.cos(np.pi / n)
    res = lovasz(n, [(i, (i + 1) % n) for i in range(n)])
    assert res.value == pytest.approx(n * c / (1 + c), abs=1e-7)
    assert res.gap < 1e-6


def test_certificates_are_consistent():
    res = lovasz(5, [(i, (i + 1) % 5) for i in range(5)])
    assert np.linalg.eigvalsh(res.X).min() > -1e-9
    assert np.linalg.eigvalsh(res.Z).min() > -1e-9
    assert np.trace(res.X) == pytest.approx(1, abs=1e-9)
    assert res.primal_infeasibility < 1e-8 and res.dual_infeasibility < 1e-8


def test_small_lp_like_problem():
    # max x11 + 2 x22 with trace one: picks the larger diagonal entry
    res = solve_sdp(np.diag([1.0, 2.0]), [SparseSym.identity(2)], [1.0])
    assert res.value == pytest.approx(2.0, abs=1e-8)


def test_against_cvxpy():
    cp = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(5)
    for n in (6, 9, 12):
        A = np.triu(rng.random((n, n)) < 0.4, 1)
        edges = list(zip(*np.nonzero(A)))
        w = rng.uniform(0.2, 2.0, n)
        s = np.sqrt(w)
        X = cp.Variable((n, n), symmetric=True)
        cons = [X >> 0, cp.trace(X) == 1] + [X[i, j] == 0 for i, j in edges]
        ref = cp.Problem(cp.Maximize(cp.sum(cp.multiply(np.outer(s, s), X))), cons).solve(solver="CLARABEL")
        c = [SparseSym.identity(n)] + [SparseSym.offdiag(int(i), int(j)) for i, j in edges]
        res = solve_sdp(np.outer(s, s), c, [1.0] + [0.0] * len(edges))
        assert res.value == pytest.approx(ref, abs=1e-5)


def test_iteration_budget():
    with pytest.raises(SolverFailure) as info:
        lovasz(7, [(i, (i + 1) % 7) for i in range(7)], max_iter=2)
    assert info.value.diagnostics["iterations"] == 2
