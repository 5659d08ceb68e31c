# %% [markdown]
# # Pentagon witnesses
#
# The five KCBS projectors live in three dimensions and consecutive ones are
# orthogonal. The system they generate has ten atoms: the five projectors
# and the five complements `P{i}{i+1}` of consecutive pairs.

# %%
import numpy as np

from atomgraph import WeightFunction, atom_graph, density_to_state, nc_inequality_report, scenario_kcbs

Q = scenario_kcbs()
G = atom_graph(Q.algebra)
print(len(Q), "elements;", len(G), "atoms")

# %% [markdown]
# On the pentagon of `P0..P4` the classical bound is 2 but quantum states
# reach sqrt(5).

# %%
g1 = G.induced([f"P{i}" for i in range(5)])
r = nc_inequality_report(g1)
print(f"alpha={r.alpha}  theta={r.theta:.6f}  alpha*={r.alpha_star}  gap={r.gap_found}")

axis = np.array([1.0, 0.0, 0.0])
p = density_to_state(np.outer(axis, axis), Q)
print("sum over pentagon in the axis state:", sum(p[f"P{i}"] for i in range(5)))

# %% [markdown]
# The other five atoms are pairwise compatible but never orthogonal, so
# their induced graph has no edges and every witness equals the total
# weight. That subgraph describes the same system yet shows no gap.

# %%
g2 = G.induced(["P01", "P12", "P23", "P34", "P40"])
print("edges:", g2.edges)
rng = np.random.default_rng(0)
for _ in range(3):
    w = WeightFunction(dict(zip(g2.vertices, rng.uniform(0, 2, 5).round(3).tolist())))
    r = nc_inequality_report(g2, w)
    print(f"alpha={float(r.alpha):.4f} theta={r.theta:.4f} alpha*={r.alpha_star:.4f}")
