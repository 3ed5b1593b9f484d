# %% [markdown]
# # Remainders R_d for the two weighted sequences
#
# A carries weight 2p log p on a^2 + p^4 and B carries log p on a^2 + p^2.
# Both are compared with the same model g(d) mu(I). Watch how the ratio to
# the model behaves as d grows.

# %%
import numpy as np

from antlab.sequences import SieveParams, build_sequence, level_table

x = 10**6
params = SieveParams.standard(x)
A = build_sequence("A", params)
B = build_sequence("B", params)
print(f"|A| = {len(A)}, |B| = {len(B)}, mu(I) = {params.mu:.3f}")

# %%
for name, C in (("A", A), ("B", B)):
    t = level_table(C, 1000, 0)
    cum = np.cumsum(t.remainder) / x
    print(name, "sum R_d / x at D = 10, 100, 1000:", cum[[9, 99, 999]].round(5))

# %% [markdown]
# A rests on a handful of primes p with p^2 in I, so its total mass is far
# from mu(I) at this size. The ratio is nearly flat in d all the same: the
# distribution over residue classes is already right, only the scale is off.
# B has many more primes and its scale is closer.

# %%
for d in (1, 5, 13, 25, 65):
    tA, tB = level_table(A, d, 0), level_table(B, d, 0)
    print(f"d = {d:3d}  A/model = {tA.count[-1] / tA.model[-1]:.4f}  B/model = {tB.count[-1] / tB.model[-1]:.4f}")
