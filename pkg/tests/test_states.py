from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

import oracles
from atomgraph import (
    GraphState,
    LepRequired,
    Substate,
    atom_graph,
    b1,
    b2,
    b2_prime,
    extend_state,
    has_ks_property,
    is_state,
    random_graph_state,
    restrict_state,
    state_feasible,
    zero_one_states,
)
from atomgraph.graph import maximal_cliques
from atomgraph.lp import rational_lp
from atomgraph.states import iter_zero_one_states
from conftest import complete, cycle, graphs, path, random_graph


def test_b2_prime_roundtrip():
    B = b2_prime()
    q = {"a1": 0.3, "b1": 0.7, "a2": 0.5, "b2": 0.5}
    p = extend_state(B, q)
    assert p.as_dict() == pytest.approx({"0": 0, "1": 1, "a1": 0.3, "b1": 0.7, "a2": 0.5, "b2": 0.5})
    assert restrict_state(B, p).as_dict() == pytest.approx(q)


def test_is_state_reports_each_axiom():
    B = b1()
    ok = extend_state(B, {"a1": 0.2, "b1": 0.3, "c": 0.5, "a2": 0.1, "b2": 0.4})
    assert is_state(B, ok).ok
    bad = ok.values.copy()
    bad[B.index("~c")] = 0.7
    axioms = {v.axiom for v in is_state(B, bad).violations}
    assert "p(~x)=1-p(x)" in axioms
    bad = ok.values.copy()
    bad[B.zero] = 0.1
    assert "p(0)=0" in {v.axiom for v in is_state(B, bad).violations}


def test_non_exclusive_algebra_is_refused():
    with pytest.raises(LepRequired):
        restrict_state(b2(), np.zeros(len(b2())))


def test_graph_state_checks():
    G = cycle(5)
    assert GraphState(G, np.full(5, 0.5)).check().ok
    assert not GraphState(G, np.full(5, 0.4)).check().ok
    assert Substate(G, np.full(5, 0.4)).check().ok
    assert not Substate(G, np.full(5, 0.6)).check().ok


def test_zero_one_states_of_b1():
    supports = [tuple(np.flatnonzero(s.values)) for s in zero_one_states(atom_graph(b1()))]
    assert len(supports) == 5


def test_odd_cycle_has_no_zero_one_state():
    # every vertex covers two edges, so five edges cannot each be hit exactly once
    assert has_ks_property(cycle(5))
    assert not has_ks_property(cycle(6))
    assert not has_ks_property(path(3))


@settings(max_examples=120, deadline=None)
@given(graphs(max_vertices=9))
def test_zero_one_states_match_brute_force(G):
    got = sorted(iter_zero_one_states(G))
    assert got == oracles.zero_one_supports(len(G), G.edges)


def test_feasible_states():
    assert state_feasible(cycle(5)).values == pytest.approx([0.5] * 5)
    assert state_feasible(atom_graph(b1())).values == pytest.approx([1 / 3] * 5)
    assert state_feasible(complete(4)).check().ok


def _rational_feasible(G):
    cl = maximal_cliques(G).masks
    n = len(G)
    A_eq = [[Fraction(c >> v & 1) for v in range(n)] for c in cl]
    A_ub = [[Fraction(int(i == v)) for v in range(n)] for i in range(n)]
    res = rational_lp([0] * n, A_ub, [1] * n, A_eq, [1] * len(cl))
    return res.status == "optimal"


def test_feasibility_agrees_with_exact_lp():
    rng = np.random.default_rng(0)
    seen_infeasible = 0
    for _ in range(400):
        G = random_graph(rng, int(rng.integers(2, 8)), 0.5)
        p = state_feasible(G)
        assert (p is not None) == _rational_feasible(G)
        if p is None:
            seen_infeasible += 1
        else:
            assert p.check().ok
    assert seen_infeasible > 0


def test_random_graph_states_are_states():
    rng = np.random.default_rng(1)
    for G in (cycle(5), atom_graph(b1()), complete(3), cycle(8)):
        for _ in range(20):
            q = random_graph_state(G, rng)
            assert q is not None and q.check().ok


@pytest.mark.parametrize("make", [b1, b2_prime])
def test_algebra_states_survive_a_round_trip(make):
    B = make()
    rng = np.random.default_rng(3)
    for _ in range(30):
        p = oracles.algebra_state_lp(B, rng)
        assert is_state(B, p).ok
        back = extend_state(B, restrict_state(B, p))
        assert np.abs(back.values - p).max() <= 1e-9
