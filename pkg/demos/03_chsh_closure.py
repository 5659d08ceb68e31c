# %% [markdown]
# # What the CHSH measurements generate
#
# The four joint measurements (a,b), (a,b'), (a',b), (a',b') give sixteen
# rank-one outcome projectors. Closing them under the algebra operations
# adds more: products of commuting correlation observables such as
# a(x)b' and a'(x)b have their own joint eigenprojectors.

# %%
import numpy as np

from atomgraph import atoms, density_to_state, maximal_contexts, random_density_matrix, scenario_chsh

Q = scenario_chsh()
B = Q.algebra
A = atoms(B)
print(len(B), "elements,", len(A), "atoms, rank histogram", np.bincount(Q.ranks()).tolist())
extra = [B.labels[a] for a in A if a not in Q.generator_ids]
print("atoms beyond the sixteen outcomes:")
for e in extra:
    print("  ", e)
print(len(maximal_contexts(B)), "maximal contexts")

# %% [markdown]
# The outcome statistics are still locally consistent: Alice's marginal does
# not depend on which of Bob's settings it is read from.

# %%
rng = np.random.default_rng(1)
p = density_to_state(random_density_matrix(4, rng), Q)
for x in ("a", "a'"):
    print(x, [round(sum(p[f"{x}+{y}{t}"] for t in "+-"), 12) for y in ("b", "b'")])
