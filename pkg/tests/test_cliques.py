import pytest
from hypothesis import given, settings

import oracles
from atomgraph.cliques import bits, enumerate_maximal_cliques, is_clique, mask_of
from atomgraph.errors import CapExceeded
from conftest import graphs


def test_bits_and_mask_roundtrip():
    assert bits(0b101101) == [0, 2, 3, 5]
    assert mask_of([5, 0, 3, 2]) == 0b101101


def test_empty_graph_has_one_empty_clique():
    assert enumerate_maximal_cliques([]) == [0]


def test_triangle_with_tail():
    adj = [0b0110, 0b0101, 0b1011, 0b0100]
    assert [bits(c) for c in enumerate_maximal_cliques(adj)] == [[0, 1, 2], [2, 3]]


def test_cap():
    adj = [0] * 5
    with pytest.raises(CapExceeded):
        enumerate_maximal_cliques(adj, cap=3)


@settings(max_examples=150, deadline=None)
@given(graphs(max_vertices=10))
def test_matches_brute_force(G):
    found = [frozenset(bits(c)) for c in enumerate_maximal_cliques(G.masks)]
    assert sorted(found, key=sorted) == oracles.maximal_cliques(len(G), G.edges)
    assert found == sorted(found, key=sorted)
    assert all(is_clique(G.masks, mask_of(c)) for c in found)
