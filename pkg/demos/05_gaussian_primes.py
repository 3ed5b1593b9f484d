# %% [markdown]
# # Gaussian integers: lattice counts, reciprocity, sectors
#
# A quick tour of the exact Gaussian-integer machinery and a look at how
# evenly Gaussian primes spread over sectors and residue classes.

# %%
import math
import random

from antlab.gaussian import GaussInt, canonical_norm_divisor, delta, mitsui_count, mitsui_main, spinor, verify_suite

g = GaussInt(-1, 8)
print("divisor of norm 5:", canonical_norm_divisor(g, 5), " of norm 13:", canonical_norm_divisor(g, 13))
print("Delta(3+2i, 1+2i) =", delta(GaussInt(3, 2), GaussInt(1, 2)), " spinor(3+2i) =", spinor(GaussInt(3, 2)))

# %%
report = verify_suite(random.Random(1), census=500, roundtrip=5000, identities=5000,
                      classes=10, members=20, delta_trials=5000, countw_trials=5000)
print({k: v for k, v in report.items() if k.endswith("failures")})
print("empirical count_w constant:", round(report["countw_empirical_C"], 4))

# %% [markdown]
# Sector counts against the equidistribution main term.

# %%
x = 10**6
for q in (1, 3, 5):
    for theta in (math.pi / 4, math.pi / 2, 2 * math.pi):
        c = mitsui_count(x, q, GaussInt(1, 0), theta)
        print(f"q = {q}  theta = {theta:.4f}  count = {c:6d}  ratio = {c / mitsui_main(x, q, theta):.4f}")
