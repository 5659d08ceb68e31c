# %% [markdown]
# # States on graphs and algebras
#
# A graph state puts a probability on each vertex so that every maximal
# clique sums to one. On an exclusive algebra these are exactly the states,
# read off on the atoms.

# %%
from atomgraph import AtomGraph, atom_graph, b1, extend_state, has_ks_property, restrict_state, state_feasible, zero_one_states

G = atom_graph(b1())
print("0-1 states of AG(b1):")
for s in zero_one_states(G):
    print("  ", [v for v, x in s.as_dict().items() if x == 1])

q = {"a1": 0.2, "b1": 0.3, "c": 0.5, "a2": 0.1, "b2": 0.4}
p = extend_state(b1(), q)
print("extended:", p.as_dict())
print("restricted back:", restrict_state(b1(), p).as_dict())

# %% [markdown]
# An odd cycle has no 0-1 state: each vertex covers two edges, so five
# edges can never be hit exactly once each. Fractional states still exist.

# %%
c5 = AtomGraph.from_edges("01234", [(str(i), str((i + 1) % 5)) for i in range(5)])
print("no 0-1 state:", has_ks_property(c5))
print("a graph state:", state_feasible(c5).as_dict())
