import pytest

from atomgraph import (
    NotRealizable,
    are_isomorphic,
    atom_graph,
    atoms,
    b1,
    b2,
    b2_prime,
    boolean_algebra,
    reconstruct,
)
from atomgraph.catalog import random_epbas
from conftest import complete, cycle, edgeless, path


@pytest.mark.parametrize("n", range(1, 7))
def test_complete_graph_gives_power_set(n):
    res = reconstruct(complete(n))
    assert res.realizable
    assert len(res.algebra) == 2**n
    assert are_isomorphic(res.algebra, boolean_algebra(n)) is not None


def test_b1_comes_back():
    res = reconstruct(atom_graph(b1()))
    assert res.realizable
    assert are_isomorphic(res.algebra, b1()) is not None


def test_b2_collapses_to_b2_prime():
    res = reconstruct(atom_graph(b2()))
    assert len(res.algebra) == 6
    assert are_isomorphic(res.algebra, b2_prime()) is not None
    assert are_isomorphic(res.algebra, b2()) is None


def test_path_is_not_an_atom_graph():
    res = reconstruct(path(3))
    assert isinstance(res, NotRealizable) and not res.realizable
    assert set(res.witnesses) == {"v0", "v2"}


def test_pentagon_is_not_an_atom_graph():
    assert not reconstruct(cycle(5)).realizable


def test_isolated_vertices_collapse_to_one():
    # an isolated atom would be its own maximal context, so it equals the top
    res = reconstruct(edgeless(3))
    assert not res.realizable
    assert reconstruct(edgeless(1)).realizable


def test_atom_labels_survive():
    res = reconstruct(atom_graph(b1()))
    B = res.algebra
    assert {B.labels[a] for a in atoms(B)} == {"a1", "b1", "c", "a2", "b2"}
    assert {B.labels[i] for i in res.atom_map.values()} == {"a1", "b1", "c", "a2", "b2"}


def test_graph_determines_random_algebras():
    for B in random_epbas(5, 40, max_elements=32):
        G = atom_graph(B)
        res = reconstruct(G)
        assert res.realizable
        assert are_isomorphic(res.algebra, B) is not None
        assert atom_graph(res.algebra).same_as(G)
