import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from atomgraph import (
    CapExceeded,
    MalformedTable,
    PartialBooleanAlgebra,
    UnknownElement,
    are_isomorphic,
    atoms,
    b1,
    b2,
    b2_prime,
    boolean_algebra,
    closure,
    exclusive,
    exclusivity_witness,
    is_transitive,
    leq,
    maximal_contexts,
    satisfies_lep,
    validate_pba,
)
from atomgraph.catalog import random_pbas


def names(B, ids):
    return {B.labels[i] for i in ids}


def test_dict_roundtrip():
    for B in (b1(), b2(), b2_prime(), boolean_algebra(3)):
        again = PartialBooleanAlgebra.from_dict(B.to_dict())
        assert again.same_tables(B)


def test_builtins_validate():
    for B in (b1(), b2(), b2_prime(), boolean_algebra(4)):
        assert validate_pba(B).ok


def test_meet_outside_compat_is_malformed():
    d = boolean_algebra(2).to_dict()
    d["elements"].append("y")
    d["neg"].append(["y", "y"])
    d["meet"].append(["x0", "y", "0"])
    with pytest.raises(MalformedTable):
        PartialBooleanAlgebra.from_dict(d)


def test_three_element_chain_is_not_boolean():
    d = {
        "elements": ["0", "m", "1"],
        "zero": "0",
        "one": "1",
        "compat": [["0", "m"], ["0", "1"], ["m", "1"]],
        "meet": [["0", "m", "0"], ["0", "1", "0"], ["m", "1", "m"]],
        "join": [["0", "m", "m"], ["0", "1", "1"], ["m", "1", "1"]],
        "neg": [["0", "1"], ["m", "m"]],
    }
    report = validate_pba(d)
    assert not report.ok
    assert report.violations


def test_non_involutive_negation_reported():
    B = b2_prime()
    neg = B.neg.copy()
    neg[B.index("a1")] = B.index("a2")
    report = validate_pba(dataclasses.replace(B, neg=neg))
    assert "neg-involution" in {v.axiom for v in report.violations}


def test_validate_cap():
    with pytest.raises(CapExceeded):
        validate_pba(boolean_algebra(3), cap=4)


def test_unknown_element():
    with pytest.raises(UnknownElement):
        b1().index("nope")
    with pytest.raises(KeyError):
        leq(b1(), "a1", "nope")


def test_order_in_b2():
    B = b2()
    assert leq(B, "a1", "c")
    assert leq(B, "c", "~b2")
    assert not leq(B, "a1", "~b2")
    assert exclusive(B, "a1", "a2")
    w = exclusivity_witness(B, "a1", "a2")
    assert leq(B, "a1", w) and leq(B, "a2", B.neg[w])
    assert not satisfies_lep(B) and not is_transitive(B)


def test_negation_is_always_exclusive():
    B = b1()
    for x in range(len(B)):
        assert exclusive(B, x, int(B.neg[x]))


def test_atoms_and_the_hidden_atom():
    assert names(b1(), atoms(b1())) == {"a1", "b1", "c", "a2", "b2"}
    B = b2()
    assert names(B, atoms(B)) == {"a1", "b1", "a2", "b2"}
    ctx_atoms = [names(B, C.atoms()) for C in maximal_contexts(B)]
    assert {"c", "a2", "b2"} in ctx_atoms


def test_contexts_of_b1():
    ctx = maximal_contexts(b1())
    assert len(ctx) == 2 and all(len(C.members) == 8 for C in ctx)
    assert all(C.is_maximal for C in ctx)


def test_closure_of_two_atoms():
    B = b1()
    got = closure(B, ["a1", "b1"])
    assert names(B, got) == {"0", "1", "a1", "b1", "c", "~a1", "~b1", "~c"}


def test_matches_naive_definitions():
    for B in [b1(), b2(), b2_prime()] + random_pbas(7, 80, identifications=(1, 5)):
        L = np.array(oracles.naive_leq(B))
        assert (B.leq_matrix == L).all()
        assert (B.exclusive_matrix == np.array(oracles.naive_exclusive(B))).all()
        assert atoms(B) == oracles.naive_atoms(B)
        assert satisfies_lep(B) == oracles.naive_lep(B)
        assert is_transitive(B) == oracles.naive_transitive(B)


def test_isomorphism_b1_b2():
    assert are_isomorphic(b1(), b2()) is None
    assert are_isomorphic(b2(), b2()) is not None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["b1", "b2", "b2p", "ba3"]))
def test_isomorphic_to_any_relabelling(seed, which):
    B = {"b1": b1, "b2": b2, "b2p": b2_prime, "ba3": lambda: boolean_algebra(3)}[which]()
    order = np.random.default_rng(seed).permutation(len(B))
    P = B.permuted(order)
    f = are_isomorphic(B, P)
    assert f is not None
    for x in range(len(B)):
        assert f[int(B.neg[x])] == P.neg[f[x]]
        for y in range(len(B)):
            if B.compat[x, y]:
                assert f[int(B.meet[x, y])] == P.meet[f[x], f[y]]
