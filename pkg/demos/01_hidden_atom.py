# %% [markdown]
# # An atom that hides inside a context
#
# Two small algebras are glued from a pair of three-atom Boolean blocks.
# In `b1` the blocks share an atom `c`. In `b2` the element `c` is an atom
# of one block but the join of two atoms in the other, so it stops being
# an atom of the whole algebra.

# %%
from atomgraph import are_isomorphic, atom_graph, atoms, b1, b2, b2_prime, maximal_contexts, reconstruct, satisfies_lep

for name, B in (("b1", b1()), ("b2", b2())):
    print(name, "atoms:", [B.labels[a] for a in atoms(B)])
    for C in maximal_contexts(B):
        print("   context atoms:", [B.labels[a] for a in C.atoms()])
    print("   exclusive (LEP):", satisfies_lep(B))

# %% [markdown]
# The atom graph of `b2` has only four vertices, and rebuilding an algebra
# from it gives a six-element algebra rather than `b2` itself.

# %%
G = atom_graph(b2())
print(G.to_dict())
res = reconstruct(G)
print("rebuilt size:", len(res.algebra))
print("same as b2' :", are_isomorphic(res.algebra, b2_prime()) is not None)
print("same as b2  :", are_isomorphic(res.algebra, b2()) is not None)

# %% [markdown]
# For an exclusive algebra such as `b1` nothing is lost.

# %%
print(are_isomorphic(reconstruct(atom_graph(b1())).algebra, b1()) is not None)
