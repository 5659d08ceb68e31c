import pytest

from atomgraph import MalformedTable, atoms, boolean_algebra, from_contexts, satisfies_lep, validate_pba
from atomgraph.catalog import random_epbas, random_pbas


@pytest.mark.parametrize("n", range(1, 6))
def test_boolean_algebra_size(n):
    B = boolean_algebra(n)
    assert len(B) == 2**n
    assert validate_pba(B).ok
    assert len(atoms(B)) == n


def test_gluing_conflict():
    with pytest.raises(MalformedTable):
        from_contexts([{"x": "a", "y": "b"}, {"x": "a", "y": "a"}])


def test_random_generators_are_reproducible():
    a = random_pbas(3, 20)
    b = random_pbas(3, 20)
    assert all(x.same_tables(y) for x, y in zip(a, b))


def test_random_algebras_are_valid():
    for B in random_pbas(11, 60, identifications=(1, 5)):
        assert len(B) <= 12
        assert validate_pba(B).ok
    for B in random_epbas(11, 30):
        assert satisfies_lep(B)
